"""
Командная строка: cpn / schubert / zonoid / sphere.

Общие флаги (--seed, --samples, --workers, --z, --format, --output) принимаются на любом уровне,
например `schubert edeg22 --samples 1000000 --seed 7`. Коды возврата: 0 - успех,
1 - вычислительная ошибка, 2 - ошибка аргументов или входного JSON.
"""

import argparse
import logging
import math
import platform
import re
import sys
from fractions import Fraction

import numpy as np
import scipy

import config
from src import cpn_ring, schubert, sphere_ring, zonoid
from src.errors import ComputationError, PiExponentMismatchError, SchemaError
from src.paths import prepare_output_path, resolve_data_path
from src.serialization import _load_json, _save_json, dumps, load_zonoid, parse_rational, to_csv, zonoid_from_dict

logger = logging.getLogger(__name__)

_TERM_RE = re.compile(r"([+-]?)([^+-]+)")
_FACTOR_RE = re.compile(r"^(s|t)(?:\^(\d+))?$")


def parse_st_polynomial(text):
    """'2*s*t^2 - 1/3*t^3' -> {(j, i): Fraction}: показатели при s и t."""
    compact = re.sub(r"\s+", "", str(text))
    if not compact:
        raise SchemaError("Пустой многочлен")
    poly = {}
    pos = 0
    for match in _TERM_RE.finditer(compact):
        if match.start() != pos:
            raise SchemaError(f"Не удалось разобрать {text!r}")
        pos = match.end()
        sign, body = match.groups()
        coeff = Fraction(-1 if sign == "-" else 1)
        j = i = 0
        for factor in body.split("*"):
            m = _FACTOR_RE.match(factor)
            if m:
                power = int(m.group(2) or 1)
                if m.group(1) == "s":
                    j += power
                else:
                    i += power
                continue
            try:
                coeff *= Fraction(factor)
            except (ValueError, ZeroDivisionError) as e:
                raise SchemaError(f"Непонятный множитель {factor!r} в {text!r}") from e
        poly[(j, i)] = poly.get((j, i), Fraction(0)) + coeff
    if pos != len(compact):
        raise SchemaError(f"Не удалось разобрать {text!r}")
    return poly


def monomial_name(j, i, first="s", second="t"):
    parts = []
    for name, power in ((first, j), (second, i)):
        if power == 1:
            parts.append(name)
        elif power > 1:
            parts.append(f"{name}^{power}")
    return " ".join(parts) or "1"


def _st_coeffs(e):
    return {monomial_name(j, d - 2 * j): c for (d, j), c in sorted(e.coeffs.items())}


def _parse_list(text, cast):
    try:
        return [cast(x) for x in str(text).split(",") if x.strip()]
    except (ValueError, SchemaError) as e:
        raise SchemaError(f"Не удалось разобрать список {text!r}: {e}") from e


# ---------- cpn ----------

def _cpn_basis(n, args):
    rows = []
    for d in range(2 * n + 1):
        for j in cpn_ring.index_range(n, d):
            i = d - 2 * j
            rows.append({
                "degree": d,
                "monomial": monomial_name(j, i),
                "length": cpn_ring.rescaled_length(n, j, i),
            })
    dims = {d: cpn_ring.dimension(n, d) for d in range(2 * n + 1)}
    primitive = {d: cpn_ring.primitive_dims(n, d) for d in range(n + 1)}
    return {"n": n, "dimensions": dims, "primitive_dims": primitive, "rows": rows}


def _cpn_multiply(n, args):
    a = cpn_ring.evaluate_polynomial(n, parse_st_polynomial(args.a))
    b = cpn_ring.evaluate_polynomial(n, parse_st_polynomial(args.b))
    product = cpn_ring.multiply(a, b)
    return {"n": n, "a": args.a, "b": args.b, "product": _st_coeffs(product)}


def _relation_report(rel):
    return {
        "name": f"F_{rel.n}",
        "degree": rel.degree,
        "ts": {monomial_name(j, i): c for (j, i), c in sorted(rel.ts.items(), reverse=True)},
        "beta_gamma": {
            monomial_name(j, i, "gamma", "beta"): value
            for (j, i), value in sorted(rel.beta_gamma.items(), reverse=True)
        },
    }


def _cpn_relations(n, args):
    first, second = cpn_ring.relations(n)
    return {
        "n": n,
        "relations": [_relation_report(first), _relation_report(second)],
        "vanish": [first.vanishes_in(n), second.vanishes_in(n)],
    }


def _cpn_length(n, args):
    e = cpn_ring.evaluate_polynomial(n, parse_st_polynomial(args.expr))
    report = {"n": n, "expr": args.expr, "by_degree": cpn_ring.length_by_degree(e)}
    try:
        report["length"] = cpn_ring.length(e)
    except PiExponentMismatchError:
        logger.warning("[WARN] Компоненты разных степеней дают разные степени π, общая длина не выводится")
    return report


def _cpn_selfint(n, args):
    closed = cpn_ring.self_intersection_codim2(n, parse_rational(args.d), parse_rational(args.delta))
    via_ring = cpn_ring.self_intersection_via_ring(n, parse_rational(args.d), parse_rational(args.delta))
    return {"n": n, "d": args.d, "delta": args.delta, "value": closed, "via_ring": via_ring,
            "agree": closed == via_ring}


def _cpn_tasaki(n, args):
    x, y = parse_rational(args.x), parse_rational(args.y)
    exact = cpn_ring.tasaki_kernel_d2(n, x, y)
    estimate = cpn_ring.mc_tasaki_kernel_d2(n, float(x), float(y), args.samples, args.seed, args.workers)
    return {"n": n, "x": x, "y": y, "exact": exact, "estimate": estimate,
            "ci": estimate.ci(args.z), "within_ci": estimate.contains(float(exact), args.z)}


def _cpn_lefschetz(n, args):
    rows = [{"d": d, "hard_lefschetz": cpn_ring.hard_lefschetz(n, d),
             "primitive_dim": cpn_ring.primitive_dims(n, d)} for d in range(n + 1)]
    return {"n": n, "rows": rows}


def _cpn_omega(n, args):
    rows = [{"k": k, "norm_sq": cpn_ring.omega_norm_sq(n, k), "binom": math.comb(n, k)} for k in range(n + 1)]
    return {"n": n, "rows": rows}


CPN_ACTIONS = {
    "basis": _cpn_basis,
    "multiply": _cpn_multiply,
    "relations": _cpn_relations,
    "length": _cpn_length,
    "selfint": _cpn_selfint,
    "tasaki": _cpn_tasaki,
    "lefschetz": _cpn_lefschetz,
    "omega": _cpn_omega,
}


def cmd_cpn(args):
    if args.n < 1:
        raise ValueError(f"--n должно быть >= 1, получено {args.n}")
    return CPN_ACTIONS[args.action](args.n, args)


# ---------- schubert ----------

def cmd_schubert(args):
    k, m = args.k, args.m
    if args.action == "lr":
        lam, mu = schubert.parse_diagram(args.a), schubert.parse_diagram(args.b)
        coeffs = schubert.lr_coefficients(lam, mu)
        inside = {str(nu): c for nu, c in coeffs.items() if nu.fits(k, m)}
        rows = [{"nu": str(nu), "c": c, "fits": nu.fits(k, m)} for nu, c in coeffs.items()]
        return {"k": k, "m": m, "lambda": str(lam), "mu": str(mu), "coefficients": inside, "rows": rows}
    if args.action == "spans":
        report = schubert.verify_span_decomposition(k, m, args.d, seed=args.seed)
        if not report.ok:
            raise ComputationError(f"Разложение Λ^{args.d} не подтвердилось: {report}")
        return {"k": k, "m": m, "d": args.d, "report": report, "ok": report.ok}
    if args.action == "shape":
        diagrams = schubert.parse_diagram_list(args.diagrams)
        estimate = schubert.mc_schubert_shape(diagrams, k, m, args.samples, args.seed, args.workers)
        return {"k": k, "m": m, "diagrams": [str(d) for d in diagrams], "estimate": estimate,
                "ci": estimate.ci(args.z)}
    components = schubert.edeg22_components(args.samples, args.seed, args.workers)
    estimate = schubert.edeg22_calibrated(components=components)
    return {"estimate": estimate, "ci": estimate.ci(args.z), "components": components}


# ---------- zonoid ----------

def _load_input(path):
    return _load_json(resolve_data_path(path))


def _load_parts(data):
    if isinstance(data, dict) and "parts" in data:
        return [zonoid_from_dict(p) for p in data["parts"]]
    return [zonoid_from_dict(data)]


def cmd_zonoid(args):
    data = _load_input(args.file)
    if args.action == "mixed-volume":
        if isinstance(data, dict) and "zonoids" in data:
            zs = [zonoid_from_dict(z) for z in data["zonoids"]]
            return {"mixed_volume": zonoid.mixed_volume(zs)}
        z = zonoid_from_dict(data)
        return {"mixed_volume": zonoid.zonotope_volume(z)}
    if args.action == "length":
        return {"length": zonoid.length(zonoid_from_dict(data))}
    if args.body is None:
        raise SchemaError("crofton требует --body")
    body = load_zonoid(resolve_data_path(args.body))
    if args.star_exp:
        parts = zonoid.hodge_dual_parts(zonoid.exp_truncated(zonoid_from_dict(data)))
    else:
        parts = _load_parts(data)
    return {"crofton": zonoid.crofton_evaluate(parts, body)}


# ---------- sphere ----------

def cmd_sphere(args):
    if args.action == "ball-table":
        return {"N": args.N, "rows": sphere_ring.ball_table(args.N)}
    codims = _parse_list(args.codims, int)
    ratios = _parse_list(args.ratios, parse_rational)
    value = sphere_ring.sphere_expected_count(args.n, codims, ratios, projective=args.projective)
    return {"n": args.n, "codims": codims, "ratios": ratios, "projective": args.projective,
            "value": value, "float": float(value)}


# ---------- разбор аргументов ----------

def _common_flags():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument('--seed', type=int, default=argparse.SUPPRESS, help='Сид (по умолчанию ZONOID_SEED)')
    p.add_argument('--samples', type=int, default=argparse.SUPPRESS, help='Число испытаний Монте-Карло')
    p.add_argument('--workers', type=int, default=argparse.SUPPRESS, help='Число потоков (на результат не влияет)')
    p.add_argument('--z', type=float, default=argparse.SUPPRESS, help='Ширина доверительного интервала в σ')
    p.add_argument('--format', choices=['json', 'csv'], default=argparse.SUPPRESS, help='Формат вывода')
    p.add_argument('--output', default=argparse.SUPPRESS, help='Файл для результата (по умолчанию stdout)')
    return p


def build_arg_parser():
    common = _common_flags()
    p = argparse.ArgumentParser(description="Вероятностные кольца пересечений: CP^n, Грассманианы, зоноиды, сферы",
                                parents=[common])
    groups = p.add_subparsers(dest='command', required=True)

    cpn = groups.add_parser('cpn', parents=[common], help='Кольцо H_E(CP^n)')
    cpn.add_argument('--n', type=int, required=True, help='Комплексная размерность')
    cpn_actions = cpn.add_subparsers(dest='action', required=True)
    cpn_actions.add_parser('basis', parents=[common], help='Базис, размерности, длины')
    mul = cpn_actions.add_parser('multiply', parents=[common], help='Произведение двух многочленов от s, t')
    mul.add_argument('--a', required=True)
    mul.add_argument('--b', required=True)
    cpn_actions.add_parser('relations', parents=[common], help='Соотношения F_n, F_{n+1}')
    ln = cpn_actions.add_parser('length', parents=[common], help='Длина многочлена от s, t')
    ln.add_argument('--expr', required=True)
    si = cpn_actions.add_parser('selfint', parents=[common], help='Ожидаемое самопересечение коразмерности 2')
    si.add_argument('--d', required=True, help='Степень d_X')
    si.add_argument('--delta', required=True, help='Отклонение Δ_X')
    ts = cpn_actions.add_parser('tasaki', parents=[common], help='Ядро Тасаки степени 2: точно и Монте-Карло')
    ts.add_argument('--x', required=True)
    ts.add_argument('--y', required=True)
    cpn_actions.add_parser('lefschetz', parents=[common], help='Жёсткий Лефшец и примитивные размерности')
    cpn_actions.add_parser('omega', parents=[common], help='Нормы ω^k/k!')

    sch = groups.add_parser('schubert', parents=[common], help='Кольцо Грассманиана G(k, k+m)')
    sch.add_argument('--k', type=int, default=2)
    sch.add_argument('--m', type=int, default=2)
    sch_actions = sch.add_subparsers(dest='action', required=True)
    lr = sch_actions.add_parser('lr', parents=[common], help='Коэффициенты Литтлвуда-Ричардсона')
    lr.add_argument('--a', required=True, help='Диаграмма, например "2,1"')
    lr.add_argument('--b', required=True)
    spans = sch_actions.add_parser('spans', parents=[common], help='Проверка разложения Λ^d на V_λ')
    spans.add_argument('--d', type=int, required=True)
    shape = sch_actions.add_parser('shape', parents=[common], help='E‖h1 v_λ1 ∧ ... ∧ hs v_λs‖')
    shape.add_argument('--diagrams', required=True, help='Диаграммы через "|", например "2|1,1"')
    sch_actions.add_parser('edeg22', parents=[common], help='Ожидаемое число прямых через 4 случайные прямые')

    zon = groups.add_parser('zonoid', parents=[common], help='Дискретные зоноиды из JSON')
    zon_actions = zon.add_subparsers(dest='action', required=True)
    for name, help_text in (('mixed-volume', 'Смешанный объём / объём зонотопа'),
                            ('length', 'Длина ℓ'),
                            ('crofton', 'Оценка валюации Крофтона')):
        sp = zon_actions.add_parser(name, parents=[common], help=help_text)
        sp.add_argument('-f', '--file', required=True, help='JSON с зоноидом')
        if name == 'crofton':
            sp.add_argument('--body', help='JSON с телом K (степень 1)')
            sp.add_argument('--star-exp', action='store_true', help='Взять L = ⋆e^M для M из --file')

    sph = groups.add_parser('sphere', parents=[common], help='Сферы и шары')
    sph_actions = sph.add_subparsers(dest='action', required=True)
    bt = sph_actions.add_parser('ball-table', parents=[common], help='κ_i и ℓ(B^{∧i}) в R^N')
    bt.add_argument('--N', type=int, required=True)
    ec = sph_actions.add_parser('expected-count', parents=[common], help='Ожидаемое пересечение на S^n')
    ec.add_argument('--n', type=int, required=True)
    ec.add_argument('--codims', required=True, help='Коразмерности через запятую')
    ec.add_argument('--ratios', required=True, help='vol(Y_i)/vol(M) через запятую')
    ec.add_argument('--projective', action='store_true', help='RP^n вместо S^n')
    return p


def _resolve_run_config(args):
    args.seed = getattr(args, 'seed', config.ZONOID_SEED)
    args.samples = getattr(args, 'samples', config.MC_SAMPLES)
    args.workers = getattr(args, 'workers', config.MC_WORKERS)
    args.z = getattr(args, 'z', config.CI_Z)
    args.format = getattr(args, 'format', config.OUTPUT_FORMAT)
    args.output = getattr(args, 'output', None)
    if args.samples < 1:
        raise ValueError(f"--samples должен быть >= 1, получено {args.samples}")
    if args.z <= 0:
        raise ValueError(f"--z должен быть > 0, получено {args.z}")
    if args.workers < 1:
        raise ValueError(f"--workers должен быть >= 1, получено {args.workers}")
    return args


def _meta(args):
    return {
        "seed": args.seed,
        "samples": args.samples,
        "workers": args.workers,
        "z": args.z,
        "versions": {"python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__},
    }


COMMANDS = {
    "cpn": cmd_cpn,
    "schubert": cmd_schubert,
    "zonoid": cmd_zonoid,
    "sphere": cmd_sphere,
}


def _emit(report, args):
    if args.output and args.format == "json":
        path = prepare_output_path(args.output)
        _save_json(path, report)
        logger.info(f"[LOG] Результат записан в {path}")
        return
    text = to_csv(report) if args.format == "csv" else dumps(report) + "\n"
    if args.output:
        path = prepare_output_path(args.output)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"[LOG] Результат записан в {path}")
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        args = _resolve_run_config(args)
        report = COMMANDS[args.command](args)
        report = {"command": args.command, "action": args.action, **report, "meta": _meta(args)}
        _emit(report, args)
    except SchemaError as e:
        logger.error(f"[ERROR] Некорректный вход: {e}")
        return 2
    except ComputationError as e:
        logger.error(f"[ERROR] Ошибка вычисления: {e}")
        return 1
    except ValueError as e:
        logger.error(f"[ERROR] Некорректные аргументы: {e}")
        return 2
    return 0
