"""Command-line entry point."""
from streampart import main


if __name__ == "__main__":
    main()
