import logging
import uuid
import contextvars
from contextlib import contextmanager


command_context = contextvars.ContextVar('command', default=None)


@contextmanager
def bind_command(command, scenario=''):
    """Attach the running command (and scenario name) to every log record emitted inside the block."""
    token = command_context.set({
        'command': command,
        'scenario': scenario or '',
        'run_id': uuid.uuid4().hex[:12],
    })
    try:
        yield command_context.get()
    finally:
        command_context.reset(token)


class CommandContextFilter(logging.Filter):
    def filter(self, record):
        context = command_context.get()
        if context:
            record.command = context.get('command', '')
            record.scenario = context.get('scenario', '')
            record.run_id = context.get('run_id', '')
        else:
            record.command = ''
            record.scenario = ''
            record.run_id = ''
        return True
