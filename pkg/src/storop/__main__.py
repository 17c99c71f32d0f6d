from storop.cli import main

raise SystemExit(main())
