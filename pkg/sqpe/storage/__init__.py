from .repository import DatabaseLogHandler, SqpeRunRepository

__all__ = ["DatabaseLogHandler", "SqpeRunRepository"]
