"""
Braided Yangian Verifier - Main Entry Point

Exact-arithmetic verification of braided-Yangian identities: R-matrices,
skew-symmetrizers, R-traces, quantum symmetric polynomials and Gaudin Hamiltonians.
"""
import sys
from pathlib import Path

# Add the project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from braided_yangian.cli import main as cli_main


def main() -> int:
    """Console-script entry point"""
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
