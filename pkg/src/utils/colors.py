"""
Color utilities for consistent terminal output formatting.

Color scheme:
- Green: Passing verdicts
- Red: Failing verdicts and errors
- Yellow: Headings and advisories
- Blue: Numbers derived from a run (empirical constants, residuals)
"""


class Colors:
    """ANSI color codes for terminal output."""

    YELLOW = "\033[93m"
    GREEN = "\033[92m"
    BLUE = "\033[94m"
    RED = "\033[91m"

    RESET = "\033[0m"

    @staticmethod
    def passed(text: str) -> str:
        """Format text as a passing verdict (green)."""
        return f"{Colors.GREEN}{text}{Colors.RESET}"

    @staticmethod
    def failed(text: str) -> str:
        """Format text as a failing verdict (red)."""
        return f"{Colors.RED}{text}{Colors.RESET}"

    @staticmethod
    def heading(text: str) -> str:
        """Format text as a heading or advisory (yellow)."""
        return f"{Colors.YELLOW}{text}{Colors.RESET}"

    @staticmethod
    def measured(text: str) -> str:
        """Format text as a measured quantity (blue)."""
        return f"{Colors.BLUE}{text}{Colors.RESET}"

    @staticmethod
    def verdict(ok: bool) -> str:
        """Render a boolean verdict as a coloured PASS/FAIL token."""
        return Colors.passed("PASS") if ok else Colors.failed("FAIL")
