# fracdiff core package: error types and special functions
