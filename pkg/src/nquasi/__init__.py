"""Counting, constructing and switching n-ary quasigroups."""
from .core import ComposedQuasigroup, Hypercube, Leaf, Node, PartialQuasigroup
from .errors import ResourceError, UsageError

__all__ = ["ComposedQuasigroup", "Hypercube", "Leaf", "Node", "PartialQuasigroup",
           "ResourceError", "UsageError"]
__version__ = "0.1.0"
