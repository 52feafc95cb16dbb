from hypothesis import settings

# Deterministic property tests: the same examples on every run.
settings.register_profile("repo", deadline=None, derandomize=True, max_examples=40,
                          print_blob=True)
settings.load_profile("repo")

#: Lines written by the acceptance tests, shown in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
