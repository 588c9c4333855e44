"""novconf: an exact kernel for Novikov conformal algebras."""

__version__ = "0.1.0"
