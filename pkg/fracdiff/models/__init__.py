# fracdiff models package: immutable parameter records
