// verification suites; filled in with the verify module
