import sys

from autoindex.main import main

sys.exit(main())
