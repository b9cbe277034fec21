"""K dissimilar s-t paths: integer formulations, exact solving and scoring."""

__version__ = "0.1.0"
