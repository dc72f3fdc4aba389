"""``packdense`` command line."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import f53_family, ft_family, packing, plot, roots, symmetry, triangle
from .errors import BracketError, ConsistencyError, DomainError, PackingFormatError

EXIT_OK, EXIT_DOMAIN, EXIT_CONSISTENCY = 0, 2, 3


def g12(x: float) -> str:
    return f"{x:.12g}"


def _floats(text: str, n: int) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise DomainError(f"expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise DomainError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise DomainError(f"range must look like LO:HI, got {text!r}") from None
    if not lo < hi:
        raise DomainError("range needs LO < HI")
    return lo, hi


def _load(path: str) -> packing.TorusPacking:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from exc
    return packing.from_json(text)


def cmd_bound(args) -> int:
    print(g12(triangle.florian_bound(args.q)))
    return EXIT_OK


def cmd_density(args) -> int:
    if (args.angles is None) == (args.radii is None):
        raise DomainError("give exactly one of --angles or --radii")
    if args.angles is not None:
        print(g12(triangle.density_angles(_floats(args.angles, 3))))
    else:
        print(g12(triangle.density_radii(_floats(args.radii, 3))))
    return EXIT_OK


def cmd_family(args) -> int:
    q = args.q
    if args.name == "ft":
        print(f"density {g12(ft_family.ft_density_closed(q))}")
        if args.geom:
            g = ft_family.ft_geometry(q)
            print(f"x {g12(g.x)}\ny {g12(g.y)}\nh {g12(g.h)}")
            print(f"density_geometric {g12(ft_family.ft_density_geometric(q))}")
    else:
        p = f53_family.solve_p(q)
        print(f"p {g12(p)}")
        print(f"density {g12(f53_family.f53_density_closed(q))}")
        if args.geom:
            for tag, (a, b) in (("p-rhombus", (q, p)), ("q-rhombus", (p, q))):
                g = f53_family.f53_geometry(1.0, a, b)
                print(f"{tag} x {g12(g.x)} y {g12(g.y)} d {g12(g.d)} valid {g.valid}")
            print(f"density_assembled {g12(f53_family.f53_density_assembled(q))}")
    return EXIT_OK


def cmd_roots(args) -> int:
    table = roots.critical_ratios()
    if args.csv:
        print("name,value,lo,hi,certificate,ok,residual")
    for cr in table.values():
        cert = f"degree-{cr.certificate.degree} polynomial" if isinstance(
            cr.certificate, roots.IntPolynomial) else cr.certificate
        lo, hi = cr.bracket
        if args.csv:
            print(f'{cr.name},{g12(cr.value)},{lo!r},{hi!r},"{cert}",{cr.certificate_ok},{cr.residual:.3e}')
        else:
            print(f"{cr.name:4s} {g12(cr.value):>16s}  [{lo:.15f}, {hi:.15f}]  {cert}  "
                  f"ok={cr.certificate_ok} residual={cr.residual:.3e}")
    if not roots.ordered(table):
        raise ConsistencyError("critical ratios are out of order")
    return EXIT_OK


def cmd_gen(args) -> int:
    p = packing.build(args.packing, args.q)
    out = Path(args.out)
    if out.suffix == ".svg":
        out.write_text(packing.render_svg(p, tiles=args.tiles))
    elif out.suffix == ".json":
        out.write_text(packing.to_json(p))
    else:
        raise DomainError("--out must end in .json or .svg")
    print(f"wrote {out} ({len(p.disks)} discs, density {g12(p.density)})")
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = packing.verify_packing(_load(args.inp))
    print(f"ok {rep.ok}\nworst_overlap {rep.worst_overlap:.3e}\ndensity {g12(rep.density)}")
    return EXIT_OK if rep.ok else EXIT_DOMAIN


def cmd_contact(args) -> int:
    g = packing.contact_graph(_load(args.inp))
    sizes = sorted(g.face_sizes)
    print(f"vertices {g.n_vertices}\nedges {g.n_edges}\nfaces {len(g.faces)}")
    print(f"face_sizes {' '.join(map(str, sizes))}")
    print(f"triangulated {g.triangulated}")
    return EXIT_OK


def cmd_symmetry(args) -> int:
    p = _load(args.inp)
    rep = symmetry.symmetry_report(p)
    print(f"group {rep.group}")
    for op in rep.isometries:
        if op.kind != "identity":
            print(f"  {op.describe()}")
    print(f"orbifold_ratio {symmetry.orbifold_ratio(p)}")
    return EXIT_OK


def cmd_plot(args) -> int:
    lo, hi = _range(args.range)
    names = [n for n in args.curves.split(",") if n]
    curves = {}
    for name in names:
        spec = plot.clipped_spec(name, lo, hi, args.samples)
        if spec is not None:
            curves[name] = plot.sample_curve(spec)
    if not curves:
        raise DomainError("no requested curve is defined on that range")
    out = Path(args.out)
    if out.suffix == ".csv":
        if len(curves) != 1:
            raise DomainError("CSV output takes exactly one curve")
        out.write_text(plot.emit_csv(next(iter(curves.values()))))
    elif out.suffix == ".svg":
        markers = {k: v.value for k, v in roots.critical_ratios().items()}
        out.write_text(plot.emit_plot_svg(curves, markers))
    else:
        raise DomainError("--out must end in .csv or .svg")
    print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="packdense", description="Densities of packings by discs of two and three sizes.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bound", help="Florian's upper bound s(q)")
    s.add_argument("--q", type=float, required=True)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("density", help="density of one tangency triangle")
    s.add_argument("--angles", help="theta1,theta2,theta3 in radians")
    s.add_argument("--radii", help="r1,r2,r3")
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("family", help="perturbed compact packing families")
    s.add_argument("name", choices=["ft", "f53"])
    s.add_argument("--q", type=float, required=True)
    s.add_argument("--geom", action="store_true", help="also print the cell geometry")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("roots", help="certified critical radius ratios")
    s.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("gen", help="build a packing and write JSON or SVG")
    s.add_argument("--packing", choices=["hex", "ft", "f53"], required=True)
    s.add_argument("--q", type=float)
    s.add_argument("--out", required=True)
    s.add_argument("--tiles", type=int, default=1)
    s.set_defaults(func=cmd_gen)

    for verb, fn, text in (("verify", cmd_verify, "check a packing for overlaps"),
                           ("contact", cmd_contact, "contact graph and its faces"),
                           ("symmetry", cmd_symmetry, "wallpaper group of a packing")):
        s = sub.add_parser(verb, help=text)
        s.add_argument("--in", dest="inp", required=True)
        s.set_defaults(func=fn)

    s = sub.add_parser("plot", help="sample density curves to CSV or SVG")
    s.add_argument("--curves", default="florian,ft,delta53")
    s.add_argument("--range", default="0.60:0.70")
    s.add_argument("--samples", type=int, default=500)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_plot)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, PackingFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConsistencyError, BracketError) as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
