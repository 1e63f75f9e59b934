"""
Database package for the SQLite run catalogue using SQLAlchemy.
"""

from .base import Base, init_database
from .models import DBReport, DBRun, DBVerdict

__all__ = [
    "Base",
    "init_database",
    "DBRun",
    "DBReport",
    "DBVerdict",
]
