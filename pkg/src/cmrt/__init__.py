"""Class numbers, ray class group orders, the Weber function and explicit
prime bounds for CM elliptic curves over number fields of small degree."""

__version__ = "0.1.0"
