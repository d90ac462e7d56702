"""Satisfiability for multi-modal hybrid logic with binders, converse
and global modalities, transitivity assertions and relation hierarchies.
"""

__version__ = "0.1.0"
