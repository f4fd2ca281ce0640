"""Interpreter and verification toolkit for recursive quantum programs with quantum case statements."""
