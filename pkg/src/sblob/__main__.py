import sys

from sblob.cli import main

sys.exit(main())
