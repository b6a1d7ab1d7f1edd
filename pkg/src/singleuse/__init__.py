"""Single-use automata and transducers over an infinite alphabet of atoms."""

__version__ = "0.1.0"
