import sys

from pyqsvtool import main

sys.exit(main())
