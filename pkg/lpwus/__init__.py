"""Physical layer and link-level simulator for the low-power wake-up signal (LP-WUS)
and low-power synchronization signal (LP-SS)."""

__version__ = "0.1.0"
