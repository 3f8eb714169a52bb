import sys

from loopsoup.experiments.cli import main

sys.exit(main())
