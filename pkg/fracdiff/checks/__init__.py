# Verification checks. Every *_check.py module here defines VerificationCheck
# subclasses that are discovered at run time by VerificationCheck.load_plugins.
