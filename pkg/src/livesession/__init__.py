"""Binary session types with responses: parsing, execution and checking."""

__version__ = "0.1.0"
