import sys
from pathlib import Path

# Make the in-repo package and the oracle helpers importable without install.
ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(ROOT / "tests"))
