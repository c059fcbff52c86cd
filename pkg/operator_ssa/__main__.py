import sys
import logging

try:
    from operator_ssa.cli import main
except ImportError as e:
    print(f"Error: Required libraries are not installed ({e}).", file=sys.stderr)
    print("Please run: pip install -r requirements.txt", file=sys.stderr)
    sys.exit(1)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logging.info("\n🛑 User interrupted the campaign. Partial records were already written.")
        sys.exit(130)
    except Exception as e:
        logging.error(f"An unexpected critical error occurred: {e}", exc_info=True)
        sys.exit(1)
