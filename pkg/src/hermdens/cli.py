"""Command-line entry point: tables, single values, suites, oracle runs.

Output is deterministic for a fixed argv + config: iteration orders are
fixed and the one randomized suite draws from an explicit seed.  Exit
status is 0 exactly when every requested check passed; domain errors are
reported by name and message and exit with status 2.
"""

import functools
import json
import sys

from fractions import Fraction

import click

from .cy_densities import (
    cy_d,
    cy_d_lambda,
    horizontal_ratio,
    pden_lattice,
    pden_primitive_at,
)
from .errors import HermdensError, InvalidInvariants, InvalidProfile
from .fourier import fourier_pden_primitive
from .lattice_enum import (
    coset_mu,
    count_split_summand_overlattices,
    mu_closed,
)
from .oracle import CountJob, density_poly, herm_count
from .padic_model import GramMatrix, HermLattice, RingModel
from .qexact import qr_eval
from .suites import DESCRIPTIONS, run_suite, suite_names


def _parse_ints(text, what):
    try:
        parts = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise click.UsageError("%s must be a comma list of integers, got %r"
                               % (what, text))
    return parts


def _parse_lam(text):
    lam = _parse_ints(text, "--lam")
    if any(a < 0 for a in lam):
        raise click.UsageError("invariants must be nonnegative, got %r" % text)
    if list(lam) != sorted(lam, reverse=True):
        raise click.UsageError("invariants must be nonincreasing, got %r"
                               % text)
    return lam


def _parse_profile(text):
    prof = _parse_ints(text, "--profile")
    if len(prof) != 3 or any(x < 0 for x in prof):
        raise click.UsageError("--profile takes three nonnegative integers "
                               "a,b,c, got %r" % text)
    return prof


def _load_config(path):
    cfg = {}
    if path is None:
        return cfg
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.UsageError("config line %d is not key=value: %r"
                                       % (lineno, raw.strip()))
            key, value = line.split("=", 1)
            cfg[key.strip()] = value.strip()
    return cfg


def _cfg(ctx, key, flag, cast=int):
    """Flag wins; config file second; None means caller's default."""
    if flag is not None:
        return flag
    raw = (ctx.obj or {}).get(key)
    if raw is None:
        return None
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise click.UsageError("config key %s=%r is not a valid %s"
                               % (key, raw, cast.__name__))


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except HermdensError as err:
            click.echo("ERROR %s: %s" % (type(err).__name__, err), err=True)
            sys.exit(2)
    return wrapper


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="key=value defaults; flags override")
@click.pass_context
def main(ctx, config_path):
    """Exact local-density invariants of hermitian lattices."""
    ctx.obj = _load_config(config_path)


@main.command("cy")
@click.option("--n", type=int, required=True)
@click.option("--h", type=int, required=True)
@click.option("--profile", "profile_text", default=None,
              help="a,b,c counts of invariants >=2, =1, =0")
@click.option("--lam", "lam_text", default=None,
              help="invariants, nonincreasing comma list")
@click.option("--q0", type=int, default=None)
@click.pass_context
@_guarded
def cy_cmd(ctx, n, h, profile_text, lam_text, q0):
    """D_{n,h} of a profile or an invariant tuple."""
    q0 = _cfg(ctx, "q0", q0) or 3
    if (profile_text is None) == (lam_text is None):
        raise click.UsageError("give exactly one of --profile or --lam")
    if profile_text is not None:
        a, b, c = _parse_profile(profile_text)
        value = cy_d(n, h, a, b, c)
        label = "D(%d,%d; %d,%d,%d)" % (n, h, a, b, c)
    else:
        lam = _parse_lam(lam_text)
        value = cy_d_lambda(n, h, lam)
        label = "D(%d,%d; lam=%s)" % (n, h, ",".join(map(str, lam)))
    click.echo("%s = %s" % (label, value))
    click.echo("at q=%d: %s" % (q0, qr_eval(value, q0)))


@main.command("pden")
@click.option("--lam", "lam_text", required=True)
@click.option("--h", type=int, required=True)
@click.option("--q0", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
@_guarded
def pden_cmd(ctx, lam_text, h, q0, budget):
    """Lattice sum of D over the integral overlattices."""
    q0 = _cfg(ctx, "q0", q0) or 3
    budget = _cfg(ctx, "budget", budget) or 10 ** 8
    lam = _parse_lam(lam_text)
    lat = HermLattice.from_invariants(RingModel(q0), lam)
    result = pden_lattice(lat, h, budget=budget)
    click.echo("pden(lam=%s, h=%d) = %s" % (lam_text, h, result.value))
    click.echo("at q=%d: %s" % (q0, qr_eval(result.value, q0)))


@main.command("pden-prim")
@click.option("--lam", "lam_text", required=True,
              help="invariants of the corank-1 sublattice")
@click.option("--n", type=int, required=True,
              help="rank after the bordering vector, = rank(lam) + 1")
@click.option("--h", type=int, required=True)
@click.option("--xval", type=int, required=True,
              help="valuation of the bordering vector's norm")
@click.option("--q0", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
@_guarded
def pden_prim_cmd(ctx, lam_text, n, h, xval, q0, budget):
    """Derived density of a bordered lattice, summed over extensions."""
    q0 = _cfg(ctx, "q0", q0) or 3
    budget = _cfg(ctx, "budget", budget) or 10 ** 8
    lam = _parse_lam(lam_text)
    if n != len(lam) + 1:
        raise click.UsageError("--n must be rank(lam)+1 = %d, got %d"
                               % (len(lam) + 1, n))
    lb = HermLattice.from_invariants(RingModel(q0), lam)
    result = pden_primitive_at(lb, h, xval, budget=budget)
    value = qr_eval(result.value, q0)
    click.echo("pden-prim(lam=%s, n=%d, h=%d, x=%d) at q=%d: %s"
               % (lam_text, n, h, xval, q0, value))


_ROUTES = ("closed-form", "stratum-sum", "enumeration")


@main.command("fourier")
@click.option("--lam", "lam_text", required=True)
@click.option("--n", type=int, required=True)
@click.option("--h", type=int, required=True)
@click.option("--xval", type=int, required=True)
@click.option("--route", type=click.Choice(_ROUTES + ("all",)),
              default="closed-form", show_default=True)
@click.option("--q0", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
@_guarded
def fourier_cmd(ctx, lam_text, n, h, xval, route, q0, budget):
    """Transform of the primitive derived density at a negative valuation."""
    q0 = _cfg(ctx, "q0", q0) or 3
    budget = _cfg(ctx, "budget", budget) or 10 ** 8
    lam = _parse_lam(lam_text)
    if n != len(lam) + 1:
        raise click.UsageError("--n must be rank(lam)+1 = %d, got %d"
                               % (len(lam) + 1, n))
    model = RingModel(q0)

    def run(name):
        kwargs = {"route": name}
        if name == "enumeration":
            kwargs.update(model=model, budget=budget)
        return fourier_pden_primitive(n, h, lam, xval, **kwargs).value

    if route != "all":
        value = run(route)
        if route == "enumeration":
            click.echo("%s at q=%d: %s" % (route, q0, qr_eval(value, q0)))
        else:
            click.echo("%s: %s" % (route, value))
        return
    closed = run("closed-form")
    strat = run("stratum-sum")
    enum = run("enumeration")
    click.echo("closed-form: %s" % closed)
    click.echo("stratum-sum: %s" % strat)
    click.echo("enumeration at q=%d: %s" % (q0, qr_eval(enum, q0)))
    agree = (closed == strat
             and qr_eval(enum, q0) == qr_eval(closed, q0))
    click.echo("agree: %s" % ("true" if agree else "false"))
    if not agree:
        sys.exit(1)


@main.command("mu")
@click.option("--lam", "lam_text", required=True)
@click.option("--which", type=click.Choice(("mu", "mu_plus", "mu_plusplus")),
              default="mu", show_default=True)
@click.option("--enumerate", "do_enum", is_flag=True, default=False,
              help="also count the coset window at q0 and compare")
@click.option("--q0", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
@_guarded
def mu_cmd(ctx, lam_text, which, do_enum, q0, budget):
    """Norm-bounded dual coset counts."""
    q0 = _cfg(ctx, "q0", q0) or 3
    budget = _cfg(ctx, "budget", budget) or 10 ** 8
    lam = _parse_lam(lam_text)
    shift = {"mu": 0, "mu_plus": 1, "mu_plusplus": 2}[which]
    if shift and any(a < shift for a in lam):
        raise InvalidInvariants("%s needs every invariant >= %d"
                                % (which, shift))
    closed = mu_closed(tuple(a - shift for a in lam))
    click.echo("%s(%s) = %s" % (which, lam_text, closed))
    click.echo("at q=%d: %s" % (q0, qr_eval(closed, q0)))
    if do_enum:
        counted = coset_mu((RingModel(q0), lam), which, budget=budget)
        click.echo("enumerated: %d" % counted)
        if counted != qr_eval(closed, q0):
            click.echo("MISMATCH closed %s vs enumerated %d"
                       % (qr_eval(closed, q0), counted))
            sys.exit(1)


@main.command("ratio")
@click.option("--n", type=int, required=True)
@click.option("--lam", type=int, required=True,
              help="the scaled summand's invariant, an integer >= 2")
@click.option("--check/--no-check", default=True, show_default=True,
              help="compare against direct overlattice counting at q0")
@click.option("--q0", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
@_guarded
def ratio_cmd(ctx, n, lam, check, q0, budget):
    """Horizontal overlattice-count ratio for one scaled summand."""
    q0 = _cfg(ctx, "q0", q0) or 3
    budget = _cfg(ctx, "budget", budget) or 10 ** 8
    value = horizontal_ratio(n, lam)
    click.echo("ratio(n=%d, lam=%d) = %s" % (n, lam, value))
    click.echo("at q=%d: %s" % (q0, qr_eval(value, q0)))
    if check:
        model = RingModel(q0)
        counted = count_split_summand_overlattices(lam - 1, n - 1, model,
                                                   budget=budget)
        click.echo("counted: %d" % counted)
        if Fraction(counted) != qr_eval(value, q0):
            click.echo("MISMATCH closed %s vs counted %d"
                       % (qr_eval(value, q0), counted))
            sys.exit(1)


@main.command("oracle")
@click.option("--m", "m_text", required=True, help="invariants of the target")
@click.option("--l", "l_text", required=True, help="invariants of the source")
@click.option("--mode", type=click.Choice(("all", "primitive")),
              default="all", show_default=True)
@click.option("--p", "p_flag", type=int, default=None,
              help="odd prime; defaults to q0")
@click.option("--poly", "kmax", type=int, default=None,
              help="fit the density polynomial with kmax padding layers")
@click.option("--budget", type=int, default=None)
@click.pass_context
@_guarded
def oracle_cmd(ctx, m_text, l_text, mode, p_flag, kmax, budget):
    """Congruence counts of hermitian maps L -> M, as JSON."""
    p = p_flag if p_flag is not None else (_cfg(ctx, "q0", None) or 3)
    budget = _cfg(ctx, "budget", budget) or 10 ** 8
    m_inv = _parse_lam(m_text)
    l_inv = _parse_lam(l_text)
    model = RingModel(p)
    m_gram = GramMatrix.from_diag(model, list(m_inv))
    l_gram = GramMatrix.from_diag(model, list(l_inv))
    if kmax is not None:
        coeffs, deriv = density_poly(m_gram, l_gram, p, kmax, budget=budget)
        click.echo(json.dumps({
            "schema": 1,
            "p": p,
            "coeffs": [str(c) for c in coeffs],
            "derivative": str(deriv),
        }, sort_keys=True))
        return
    d0 = max([0] + [max(l_inv, default=0), max(m_inv, default=0)]) + 1
    n, m = len(l_inv), len(m_inv)
    norm = []
    counts = []
    for d in (d0, d0 + 1):
        job = CountJob(m_gram, l_gram, RingModel(p, d), mode=mode)
        c = herm_count(job, budget=budget)
        counts.append(c)
        norm.append(Fraction(c, p ** (d * n * (2 * m - n))))
    stabilized = norm[0] == norm[1]
    click.echo(json.dumps({
        "schema": 1,
        "p": p,
        "mode": mode,
        "count": counts[1],
        "d": d0 + 1,
        "normalized": str(norm[1]),
        "stabilized": stabilized,
    }, sort_keys=True))
    if not stabilized:
        sys.exit(1)


@main.command("verify")
@click.option("--suite", "suites", multiple=True,
              help="suite name; repeatable; default all")
@click.option("--nmax", type=int, default=None)
@click.option("--amax", type=int, default=None)
@click.option("--hmax", type=int, default=None)
@click.option("--jmax", type=int, default=None)
@click.option("--q0", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.pass_context
@_guarded
def verify_cmd(ctx, suites, nmax, amax, hmax, jmax, q0, budget, seed):
    """Run verification suites; exit 0 only if every case passes."""
    if not suites:
        raw = (ctx.obj or {}).get("suites")
        suites = tuple(s.strip() for s in raw.split(",")) if raw else \
            suite_names()
    params = {
        "nmax": nmax,
        "amax": amax,
        "hmax": hmax,
        "jmax": jmax,
        "q0": _cfg(ctx, "q0", q0),
        "budget": _cfg(ctx, "budget", budget),
        "seed": _cfg(ctx, "seed", seed),
    }
    bad = [s for s in suites if s not in suite_names()]
    if bad:
        raise click.UsageError("unknown suite(s) %s; known: %s"
                               % (", ".join(bad), ", ".join(suite_names())))
    failed = 0
    for name in suites:
        result = run_suite(name, **params)
        click.echo(result.line())
        for case in result.failures():
            failed += 1
            click.echo("  FAIL %s :: %s" % (case.key, case.detail))
    if failed:
        click.echo("%d case(s) failed" % failed)
        sys.exit(1)
    click.echo("all suites passed")


_D_GROUPS = {
    "rank3": ((3, 1, (4, 4, 4)), (3, 1, (4, 3, 1)), (3, 1, (4, 4, 0)),
              (3, 1, (3, 1, 0))),
    "rank6": ((4, 2, (2, 2, 0, 0)), (4, 2, (2, 2, 1, 0)),
              (4, 2, (1, 1, 1, 0)), (6, 2, (2, 2, 2, 2, 1, 1))),
}

_DDEN_ROWS = tuple((4, 2, lam, x)
                   for lam in ((1, 0, 0), (2, 1, 0), (3, 0, 0), (2, 2, 1))
                   for x in (2, 4))

_FOURIER_ROWS = tuple((4, 2, lam, -1)
                      for lam in ((4, 4, 4), (4, 3, 1), (4, 4, 0), (3, 1, 0)))

TABLE_GROUPS = ("rank3", "rank6", "dden", "fourier")


def _profile_of(lam):
    return (sum(1 for v in lam if v >= 2), sum(1 for v in lam if v == 1),
            sum(1 for v in lam if v == 0))


def _d_rows(group, q0):
    rows = []
    for n, h, lam in _D_GROUPS[group]:
        a, b, c = _profile_of(lam)
        value = cy_d_lambda(n, h, lam)
        rows.append({
            "n": n, "h": h, "a": a, "b": b, "c": c,
            "parity": "even" if sum(lam) % 2 == 0 else "odd",
            "D": str(value),
            "D_at_q0": str(qr_eval(value, q0)),
        })
    return rows


def _dden_rows(q0, budget):
    model = RingModel(q0)
    rows = []
    for n, h, lam, x in _DDEN_ROWS:
        lb = HermLattice.from_invariants(model, lam)
        value = pden_primitive_at(lb, h, x, budget=budget)
        rows.append({
            "n": n, "h": h, "lam": ",".join(map(str, lam)), "x": x,
            "value_at_q0": str(qr_eval(value.value, q0)),
        })
    return rows


def _fourier_rows(q0):
    rows = []
    for n, h, lam, x in _FOURIER_ROWS:
        value = fourier_pden_primitive(n, h, lam, x).value
        rows.append({
            "n": n, "h": h, "lam": ",".join(map(str, lam)), "x": x,
            "D": str(value),
            "D_at_q0": str(qr_eval(value, q0)),
        })
    return rows


_GROUP_COLUMNS = {
    "rank3": ("n", "h", "a", "b", "c", "parity", "D", "D_at_q0"),
    "rank6": ("n", "h", "a", "b", "c", "parity", "D", "D_at_q0"),
    "dden": ("n", "h", "lam", "x", "value_at_q0"),
    "fourier": ("n", "h", "lam", "x", "D", "D_at_q0"),
}


def _csv_quote(value):
    text = str(value)
    if "," in text or '"' in text:
        return '"%s"' % text.replace('"', '""')
    return text


@main.command("table")
@click.option("--group", type=click.Choice(TABLE_GROUPS + ("all",)),
              default="all", show_default=True)
@click.option("--output", "output_flag",
              type=click.Choice(("csv", "json")), default=None)
@click.option("--q0", type=int, default=None)
@click.option("--budget", type=int, default=None)
@click.pass_context
@_guarded
def table_cmd(ctx, group, output_flag, q0, budget):
    """Regenerate the reference tables."""
    q0 = _cfg(ctx, "q0", q0) or 3
    budget = _cfg(ctx, "budget", budget) or 10 ** 8
    output = _cfg(ctx, "output", output_flag, cast=str) or "csv"
    if output not in ("csv", "json"):
        raise click.UsageError("output must be csv or json, got %r" % output)
    groups = TABLE_GROUPS if group == "all" else (group,)
    built = {}
    for name in groups:
        if name in _D_GROUPS:
            built[name] = _d_rows(name, q0)
        elif name == "dden":
            built[name] = _dden_rows(q0, budget)
        else:
            built[name] = _fourier_rows(q0)
    if output == "json":
        click.echo(json.dumps({"schema": 1, "q0": q0, "groups": built},
                              sort_keys=True))
        return
    first = True
    for name in groups:
        if not first:
            click.echo("")
        first = False
        cols = _GROUP_COLUMNS[name]
        click.echo("# group=%s" % name)
        click.echo(",".join(cols))
        for row in built[name]:
            click.echo(",".join(_csv_quote(row[c]) for c in cols))


@main.command("suites")
def suites_cmd():
    """List the known verification suites."""
    for name in suite_names():
        click.echo("%-10s %s" % (name, DESCRIPTIONS[name]))


if __name__ == "__main__":
    main()
