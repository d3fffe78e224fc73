import logging

import click

from config import Config, get_config
from services.serialization import dumps

# Configure logging for the whole toolkit
logging.basicConfig(
    level=getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s %(levelname)s %(name)s: %(message)s'
)


@click.group(invoke_without_command=True)
@click.option('--verbose', '-v', is_flag=True, help='Enable debug logging.')
@click.option('--env', default=None, help='Configuration name (development, production, testing).')
@click.option('--show-config', is_flag=True, help='Print the active settings and exit.')
@click.pass_context
def cli(ctx, verbose, env, show_config):
    """Exact twistor coordinates, winding and crossing numbers for the tree amplituhedron."""
    settings = get_config(env)
    ctx.ensure_object(dict)
    ctx.obj['settings'] = settings
    level = logging.DEBUG if verbose else getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO)
    logging.getLogger().setLevel(level)
    if show_config:
        click.echo(dumps(settings.summary()), nl=False)
        ctx.exit(0)
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


# Import and register commands
import commands  # noqa: F401,E402
