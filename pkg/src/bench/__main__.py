from src.bench.cli import main

raise SystemExit(main())
