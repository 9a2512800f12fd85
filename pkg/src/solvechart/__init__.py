"""Chart question answering via solution programs over pluggable answer agents."""

__version__ = "0.1.0"
