from .io_cli import console_entry

console_entry()
