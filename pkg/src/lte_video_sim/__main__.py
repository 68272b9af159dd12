import sys

from lte_video_sim.cli import main

if __name__ == "__main__":
    sys.exit(main())
