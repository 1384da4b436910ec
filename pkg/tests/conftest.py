_ACCEPTANCE = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    number, title = marker.args[0], marker.args[1]
    if call.when == "setup" and call.excinfo is not None:
        _ACCEPTANCE[number] = (title, "ERROR", "")
    if call.when != "call":
        return
    detail = dict(item.user_properties).get("detail", "")
    if call.excinfo is None:
        status = "PASS"
    elif call.excinfo.errisinstance(AssertionError):
        status = "FAIL"
    else:
        status = "ERROR"
    _ACCEPTANCE[number] = (title, status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status, detail = _ACCEPTANCE[number]
        line = f"[{status}] {number}. {title}"
        if detail:
            line += f" :: {detail}"
        terminalreporter.write_line(line)
