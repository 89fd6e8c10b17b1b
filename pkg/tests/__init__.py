"""Empty file to allow pytest-cov to collect data."""
