"""Graph repair: nested graph conditions, DPO rules with interfaces, and
synthesis of repair programs."""

__version__ = "0.1.0"
