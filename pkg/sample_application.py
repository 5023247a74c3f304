import logging

from bredon.batch import run_batch
from bredon.battery import inverting_action
from bredon.config import Budgets
from bredon.dimension import cd_report, verify_shapiro
from bredon.family import all_families, proper_family
from bredon.nonab import h1
from bredon.orbitcat import OrbitCategory
from bredon.permgroup import alternating, perm_from_cycles, symmetric
from bredon.posetred import crown, e_reduction
from bredon.specs import BatchManifest, parse
from bredon.zcat import constant_module, ext_groups

# Configure logging
logging.basicConfig(level=logging.INFO)


def orbit_category_tour():
    G = symmetric(3)
    orbit = OrbitCategory(proper_family(G))
    print(f"Proper orbit category of Sym(3): subgroup orders {[H.order for H in orbit.subgroups]}")
    groups = ext_groups(orbit.constant(), constant_module(orbit.category, 2), 3)
    print(f"Ext^n(Z, Z/2), n <= 3: {[str(g) for g in groups]}")
    print(f"Families of Sym(3): {len(all_families(G))}")


def dimension_tour():
    G = alternating(4)
    report = cd_report(G, proper_family(G), 3)
    print(f"cd of A4 for the proper family: {report.value}")
    H = G.subgroup([perm_from_cycles(4, [(0, 1, 2)])])
    shapiro = verify_shapiro(G, proper_family(G), H, n_max=2)
    print(f"Shapiro for a 3-cycle in A4: {'pass' if shapiro.passed else 'fail'}")


def nonabelian_tour():
    classes = h1(inverting_action())
    print(f"|H^1(Z/2; Z/3)| with the inversion action: {len(classes)}")


def poset_tour():
    P = crown(2, 2)
    E = e_reduction(P)
    print(f"E-reduction of the crown keeps {len(E)} of {len(P)} elements")


def batch_tour():
    manifest = parse(
        BatchManifest,
        {
            "jobs": [
                {"id": "s4-classes", "command": "subgroups", "inputs": {"group": "s4"}},
                {"id": "d4-families", "command": "families", "inputs": {"group": "d4"}},
                {"id": "z2-cd", "command": "cd", "inputs": {"group": "z2", "family": "trivial"}},
                {"id": "bad-group", "command": "subgroups", "inputs": {"group": "z7"}},
            ]
        },
    )
    report = run_batch(manifest, Budgets(workers=2, job_timeout=60))
    for result in report.results:
        print(f"{result.job.id}: {result.status}")
    print(f"Batch exit code: {report.exit_code}")


if __name__ == "__main__":
    orbit_category_tour()
    dimension_tour()
    nonabelian_tour()
    poset_tour()
    batch_tour()
