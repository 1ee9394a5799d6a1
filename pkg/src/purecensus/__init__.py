"""Census and asymptotic constants for pure number fields of odd prime degree."""

__version__ = "0.1.0"
