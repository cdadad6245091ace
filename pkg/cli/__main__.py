from dotenv import load_dotenv

# tolerance overrides are read when the settings module is first imported
load_dotenv()

from cli.main import main  # noqa: E402

raise SystemExit(main())
