from .machine_text import parse_machine, read_machine
