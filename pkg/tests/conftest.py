def pytest_terminal_summary(terminalreporter):
    module = None
    for mod_name, mod in list(__import__("sys").modules.items()):
        if mod_name.endswith("test_acceptance") and hasattr(mod, "RESULTS"):
            module = mod
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
