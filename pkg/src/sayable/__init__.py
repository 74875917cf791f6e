"""sayable: learns which words a user finds hard to pronounce, highlights
them while writing, and proposes easier alternatives."""

__version__ = "0.1.0"
