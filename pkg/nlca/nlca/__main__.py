import sys

from dotenv import load_dotenv

from nlca._application import NlcaApplication


def main():
    """Run the nlca application."""
    load_dotenv()
    app = NlcaApplication()
    sys.exit(app.run())


if __name__ == '__main__':
    main()
