"""Allow `python -m bubble_casimir`."""
from .cli import main

main()
