import re


def brute_max_run(s: str) -> int:
    """Longest 0-run by regex, independent of the library's helper."""
    return max((len(m) for m in re.findall("0+", s)), default=0)


# criterion -> list of (ok, detail); filled by the acceptance suite
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[num]
        ok = all(p[0] for p in parts)
        detail = "; ".join(p[1] for p in parts)
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})")
