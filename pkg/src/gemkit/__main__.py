from gemkit.cli import main
import sys

sys.exit(main())
