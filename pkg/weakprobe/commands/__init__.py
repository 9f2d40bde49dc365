"""
Weakprobe command handlers

One module per sub-command; handlers receive the wired services through set_services
"""

from . import prepare, run, sweep, calibrate

COMMANDS = (prepare, run, sweep, calibrate)


def set_services(services):
    """Inject services into every command module"""
    for command in COMMANDS:
        command.set_services(services)


__all__ = ['COMMANDS', 'set_services', 'prepare', 'run', 'sweep', 'calibrate']
