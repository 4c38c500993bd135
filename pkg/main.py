"""
IsQP - Infeasible-Start Quadratic Programming
==============================================
Qabarıq kvadratik proqramlar üçün exact-penalty interior-point həlledici.

İstifadə:
    python main.py solve problem.json
    python main.py gen --m 100 --n 10 --p 5 --kind sc --seed 7 -o out.json
    python main.py bench --m 2000 --n 10,20,50 --reps 20
    python main.py svm data.csv --tau 1
"""

import os
import sys

# Add project root to path
PROJECT_ROOT = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, PROJECT_ROOT)

from src.cli.commands import main


if __name__ == "__main__":
    sys.exit(main())
