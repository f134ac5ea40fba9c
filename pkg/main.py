"""Main entry point for the orthoforms command-line toolkit."""

from src.cli import main_cli

if __name__ == "__main__":
    raise SystemExit(main_cli())
