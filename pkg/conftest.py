"""Make src/ importable when running pytest without installing the package."""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).parent / "src"))
