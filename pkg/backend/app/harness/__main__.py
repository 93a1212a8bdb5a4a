from app.harness.cli import main

raise SystemExit(main())
