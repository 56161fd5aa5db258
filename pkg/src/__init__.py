"""qmqv - exact verification workbench for q-deformed quiver algebras."""

__version__ = "0.1.0"
