# Normalization, moment and tail fits, verification reports
