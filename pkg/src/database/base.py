"""
Database base configuration and session management.
"""

from pathlib import Path

from sqlalchemy import create_engine
from sqlalchemy.orm import Session, declarative_base, sessionmaker

# Base class for all database models
Base = declarative_base()


def init_database(db_path: str = "runs.db") -> Session:
    """
    Initialize the run catalogue and return a session.

    Args:
        db_path: Path to the SQLite database file

    Returns:
        SQLAlchemy session
    """
    Path(db_path).parent.mkdir(parents=True, exist_ok=True)
    engine = create_engine(f"sqlite:///{db_path}", echo=False)

    # Create all tables
    Base.metadata.create_all(engine)

    SessionFactory = sessionmaker(bind=engine)
    return SessionFactory()
