"""In-memory Datalog engine with minimal index selection."""

__version__ = "1.0.0"
