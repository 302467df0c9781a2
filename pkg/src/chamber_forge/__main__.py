"""Allow ``python3 -m chamber_forge``."""
from .cli import main

raise SystemExit(main())
