import functools
import logging
import os
import sys
from itertools import combinations

import click

from app import cli
from errors import AmplituhedronError, ContractError
from models import CommandConfig, Verdict, scalar_to_str
from services.crossing import crossing_number
from services.exact_core import sign
from services.membership import membership_m2, signflip_membership_m2
from services.positivity import sample_context
from services.serialization import (csv_text, dumps, read_context, write_json_atomic,
                                    write_text_atomic)
from services.svg_render import render_polygon_svg
from services.twistor import coarse_boundary_report, twistor
from services.verification import VerificationHarness, failure_dump, parse_grid
from services.winding import mu_ray_winding, winding_number

logger = logging.getLogger(__name__)

C_KINDS = ('vandermonde', 'network', 'boundary')


def handle_errors(f):
    """Map toolkit errors onto exit codes; anything unexpected exits with 1"""
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except AmplituhedronError as e:
            logger.error("%s: %s", type(e).__name__, e)
            click.echo(f"error: {e}", err=True)
            sys.exit(e.exit_code)
        except (click.exceptions.Exit, click.ClickException, SystemExit):
            raise
        except Exception as e:
            logger.exception("unexpected failure")
            click.echo(f"error: {e}", err=True)
            sys.exit(1)
    return wrapper


def emit(config: CommandConfig, text: str):
    """Write to the output path atomically, or to stdout"""
    if config.output:
        write_text_atomic(config.output, text)
        logger.info("wrote %s", config.output)
    else:
        click.echo(text, nl=False)


def _load(config: CommandConfig, settings):
    return read_context(config.inputs[0], allow_large_n=config.allow_large_n, max_n=settings.MAX_N)


def run_sample(config: CommandConfig, settings) -> int:
    n, k, m = config.options['n'], config.options['k'], config.options['m']
    if n > settings.MAX_N and not config.allow_large_n:
        raise ContractError(f"n={n} exceeds the limit {settings.MAX_N}; pass --allow-large-n")
    ctx = sample_context(n, k, m, config.seed, c_kind=config.options.get('c_kind', 'vandermonde'))
    emit(config, dumps(ctx.to_dict()))
    return 0


def run_twistor(config: CommandConfig, settings) -> int:
    ctx = _load(config, settings)
    rows = []
    for window in combinations(range(1, ctx.n + 1), ctx.m):
        value = twistor(ctx, window)
        rows.append((' '.join(map(str, window)), scalar_to_str(value), sign(value)))
    emit(config, csv_text(('window', 'value', 'sign'), rows))
    return 0


def run_winding(config: CommandConfig, settings) -> int:
    ctx = _load(config, settings)
    if config.mode == 'mu':
        result = mu_ray_winding(ctx)
    else:
        result = winding_number(ctx, ray_seed=config.seed, retries=settings.RAY_RETRIES)
    emit(config, dumps(result.to_dict()))
    return 0


def run_crossing(config: CommandConfig, settings) -> int:
    ctx = _load(config, settings)
    emit(config, dumps(crossing_number(ctx).to_dict()))
    return 0


def run_membership(config: CommandConfig, settings) -> int:
    ctx = _load(config, settings)
    if ctx.m == 2:
        verdict = membership_m2(ctx, ray_seed=config.seed, retries=settings.RAY_RETRIES)
        data = verdict.to_dict()
        data['sign_flips'] = signflip_membership_m2(ctx).to_dict()
    else:
        # Only m = 2 is decided; report the invariants without a verdict
        data = {'verdict': Verdict.UNPROVEN.value,
                'coarse_boundary': coarse_boundary_report(ctx).to_dict()}
        if ctx.m % 2:
            data['crossing'] = crossing_number(ctx).count
        elif coarse_boundary_report(ctx).without_coarse_boundary:
            result = winding_number(ctx, ray_seed=config.seed, retries=settings.RAY_RETRIES)
            data['winding_magnitude'] = result.magnitude
    emit(config, dumps(data))
    return 0


def run_verify(config: CommandConfig, settings) -> int:
    cells = parse_grid(config.options.get('grid', 'default'))
    seeds = config.options.get('seeds') or settings.DEFAULT_SEEDS
    workers = config.options.get('workers') or settings.WORKERS
    report = VerificationHarness(settings).run(cells, seeds, workers)
    data = report.to_dict()
    data['settings'] = settings.summary()
    if config.output:
        write_json_atomic(config.output, data)
    else:
        click.echo(dumps(report.summary), nl=False)
    dump = failure_dump(report)
    if dump is not None:
        target = (os.path.splitext(config.output)[0] + '.failure.json') if config.output else None
        if target:
            write_json_atomic(target, dump)
            click.echo(f"first failure written to {target}", err=True)
        else:
            click.echo(dumps(dump), err=True, nl=False)
        return 1
    return 0


def run_render(config: CommandConfig, settings) -> int:
    ctx = _load(config, settings)
    emit(config, render_polygon_svg(ctx))
    return 0


RUNNERS = {
    'sample': run_sample,
    'twistor': run_twistor,
    'winding': run_winding,
    'crossing': run_crossing,
    'membership': run_membership,
    'verify': run_verify,
    'render': run_render,
}


def run(config: CommandConfig, settings) -> int:
    """Dispatch one resolved subcommand; returns its exit code"""
    runner = RUNNERS.get(config.subcommand)
    if runner is None:
        raise ContractError(f"unknown subcommand '{config.subcommand}'")
    logger.debug("running %s", config.to_dict())
    return runner(config, settings)


def _finish(ctx: click.Context, config: CommandConfig):
    code = run(config, ctx.obj['settings'])
    if code:
        sys.exit(code)


context_argument = click.argument('context_path', type=click.Path(exists=True, dir_okay=False))
output_option = click.option('--out', '-o', 'output', type=click.Path(dir_okay=False), default=None,
                             help='Write to this file instead of stdout.')
large_n_option = click.option('--allow-large-n', is_flag=True, help='Accept n above AMPLI_MAX_N.')


@cli.command()
@click.option('--n', 'n', type=int, required=True)
@click.option('--k', 'k', type=int, required=True)
@click.option('--m', 'm', type=int, required=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--c-kind', type=click.Choice(C_KINDS), default='vandermonde', show_default=True)
@output_option
@large_n_option
@click.pass_context
@handle_errors
def sample(ctx, n, k, m, seed, c_kind, output, allow_large_n):
    """Draw a seeded context: Vandermonde Z and C of the chosen kind."""
    _finish(ctx, CommandConfig(subcommand='sample', seed=seed, output=output, allow_large_n=allow_large_n,
                               options={'n': n, 'k': k, 'm': m, 'c_kind': c_kind}))


@cli.command(name='twistor')
@context_argument
@output_option
@large_n_option
@click.pass_context
@handle_errors
def twistor_command(ctx, context_path, output, allow_large_n):
    """Every twistor coordinate <Y, i_1..i_m> on ascending index lists, as CSV."""
    _finish(ctx, CommandConfig(subcommand='twistor', inputs=(context_path,), output=output,
                               allow_large_n=allow_large_n))


@cli.command()
@context_argument
@click.option('--mode', type=click.Choice(('random', 'mu')), default='random', show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@output_option
@large_n_option
@click.pass_context
@handle_errors
def winding(ctx, context_path, mode, seed, output, allow_large_n):
    """Winding number for even m (exit 4 on the coarse boundary)."""
    _finish(ctx, CommandConfig(subcommand='winding', inputs=(context_path,), seed=seed, mode=mode,
                               output=output, allow_large_n=allow_large_n))


@cli.command()
@context_argument
@output_option
@large_n_option
@click.pass_context
@handle_errors
def crossing(ctx, context_path, output, allow_large_n):
    """Crossing number for odd m."""
    _finish(ctx, CommandConfig(subcommand='crossing', inputs=(context_path,), output=output,
                               allow_large_n=allow_large_n))


@cli.command()
@context_argument
@click.option('--seed', type=int, default=0, show_default=True)
@output_option
@large_n_option
@click.pass_context
@handle_errors
def membership(ctx, context_path, seed, output, allow_large_n):
    """Inside/Outside verdict for m = 2; Unproven with invariants otherwise."""
    _finish(ctx, CommandConfig(subcommand='membership', inputs=(context_path,), seed=seed, output=output,
                               allow_large_n=allow_large_n))


@cli.command()
@click.option('--grid', default='default', show_default=True,
              help="Preset name or blocks like 'm=2,4;k=1-4;n=0-3' joined by '|'.")
@click.option('--seeds', type=int, default=None, help='Seeds per grid cell.')
@click.option('--workers', type=int, default=None, help='Process count for grid cells.')
@output_option
@click.pass_context
@handle_errors
def verify(ctx, grid, seeds, workers, output):
    """Reproduce the winding and crossing theorems on a grid; exit 0 iff every case passes."""
    _finish(ctx, CommandConfig(subcommand='verify', output=output,
                               options={'grid': grid, 'seeds': seeds, 'workers': workers}))


@cli.command()
@context_argument
@output_option
@large_n_option
@click.pass_context
@handle_errors
def render(ctx, context_path, output, allow_large_n):
    """SVG of the projected points, the polygon and the origin (m = 2)."""
    _finish(ctx, CommandConfig(subcommand='render', inputs=(context_path,), output=output,
                               allow_large_n=allow_large_n))
