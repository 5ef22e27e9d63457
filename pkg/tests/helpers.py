"""Seeded random generators shared by the test modules."""

from fractions import Fraction as F

from fdl import (
    And,
    AtLeast,
    AtLeastUnq,
    Compose,
    Constant,
    ConceptName,
    Delta,
    Exists,
    FeatureSet,
    Forall,
    Implies,
    Interpretation,
    InvNeg,
    Inverse,
    Less,
    LessUnq,
    Nominal,
    Not,
    Or,
    RoleName,
    RoleUnion,
    SelfLoop,
    Star,
    Test,
    Universal,
)

POOL3 = (F(0), F(1, 2), F(1))
POOL4 = (F(0), F(1, 3), F(2, 3), F(1))


def random_model(
    rng,
    prefix,
    size,
    pool=POOL3,
    concept_names=("A",),
    role_names=("r",),
    individual_names=(),
    density=0.6,
):
    domain = [f"{prefix}{i}" for i in range(size)]
    concepts = {
        name: {x: rng.choice(pool) for x in domain} for name in concept_names
    }
    roles = {}
    for name in role_names:
        edges = {}
        for x in domain:
            for y in domain:
                if rng.random() < density:
                    value = rng.choice(pool)
                    if value:
                        edges[(x, y)] = value
        roles[name] = edges
    individuals = {a: rng.choice(domain) for a in individual_names}
    return Interpretation(domain, individuals, concepts, roles)


def rename_model(interp, mapping):
    """A copy of ``interp`` with elements renamed by ``mapping``."""
    domain = [mapping[x] for x in interp.domain]
    individuals = {a: mapping[x] for a, x in interp.individuals.items()}
    concepts = {
        name: {mapping[x]: v for x, v in zip(interp.domain, row) if v}
        for name, row in interp.concepts.items()
    }
    roles = {
        name: {
            (mapping[x], mapping[y]): v for x, y, v in rel.entries() if v
        }
        for name, rel in interp.roles.items()
    }
    return Interpretation(domain, individuals, concepts, roles)


def random_features(rng, with_bounds=True):
    q = frozenset(rng.sample([1, 2], rng.randint(0, 1))) if with_bounds else frozenset()
    n = frozenset(rng.sample([1, 2], rng.randint(0, 1))) if with_bounds else frozenset()
    return FeatureSet(
        inverse=rng.random() < 0.4,
        nominals=rng.random() < 0.4,
        universal=rng.random() < 0.3,
        self_loops=rng.random() < 0.3,
        q_bounds=q,
        n_bounds=n,
    )


def random_role(rng, features, role_names, depth, concept_maker):
    choices = ["name"]
    if features.inverse:
        choices.append("inverse")
    if features.universal:
        choices.append("universal")
    if depth > 0:
        choices += ["compose", "union", "star", "test"]
    kind = rng.choice(choices)
    if kind == "name":
        return RoleName(rng.choice(role_names))
    if kind == "inverse":
        return Inverse(random_role(rng, features, role_names, depth - 1, concept_maker))
    if kind == "universal":
        return Universal()
    if kind == "compose":
        return Compose(
            random_role(rng, features, role_names, depth - 1, concept_maker),
            random_role(rng, features, role_names, depth - 1, concept_maker),
        )
    if kind == "union":
        return RoleUnion(
            random_role(rng, features, role_names, depth - 1, concept_maker),
            random_role(rng, features, role_names, depth - 1, concept_maker),
        )
    if kind == "star":
        return Star(random_role(rng, features, role_names, depth - 1, concept_maker))
    return Test(concept_maker(rng, depth - 1))


def random_basic_role(rng, features, role_names):
    name = RoleName(rng.choice(role_names))
    if features.inverse and rng.random() < 0.4:
        return Inverse(name)
    return name


def random_concept(
    rng,
    features,
    depth,
    pool=POOL3,
    concept_names=("A",),
    role_names=("r",),
    individual_names=(),
    extended=False,
):
    """A well-formed random concept; with ``extended`` the involutive
    negation and projection constructors are allowed too."""

    def make(rng, d):
        return random_concept(
            rng, features, d, pool, concept_names, role_names, individual_names, extended
        )

    leaves = ["constant", "name"]
    if features.nominals and individual_names:
        leaves.append("nominal")
    if features.self_loops:
        leaves.append("selfloop")
    if depth <= 0:
        kind = rng.choice(leaves)
    else:
        choices = leaves + ["not", "and", "or", "implies", "exists", "forall"]
        if extended:
            choices += ["invneg", "delta"]
        if features.q_bounds:
            choices += ["atleast", "less"]
        if features.n_bounds:
            choices += ["atleastunq", "lessunq"]
        kind = rng.choice(choices)
    if kind == "constant":
        return Constant(rng.choice(pool))
    if kind == "name":
        return ConceptName(rng.choice(concept_names))
    if kind == "nominal":
        return Nominal(rng.choice(individual_names))
    if kind == "selfloop":
        return SelfLoop(rng.choice(role_names))
    if kind == "not":
        return Not(make(rng, depth - 1))
    if kind == "invneg":
        return InvNeg(make(rng, depth - 1))
    if kind == "delta":
        return Delta(make(rng, depth - 1))
    if kind == "and":
        return And(make(rng, depth - 1), make(rng, depth - 1))
    if kind == "or":
        return Or(make(rng, depth - 1), make(rng, depth - 1))
    if kind == "implies":
        return Implies(make(rng, depth - 1), make(rng, depth - 1))
    if kind == "exists":
        return Exists(
            random_role(rng, features, role_names, depth - 1, make), make(rng, depth - 1)
        )
    if kind == "forall":
        return Forall(
            random_role(rng, features, role_names, depth - 1, make), make(rng, depth - 1)
        )
    if kind == "atleast":
        return AtLeast(
            rng.choice(sorted(features.q_bounds)),
            random_basic_role(rng, features, role_names),
            make(rng, depth - 1),
        )
    if kind == "less":
        return Less(
            rng.choice(sorted(features.q_bounds)),
            random_basic_role(rng, features, role_names),
            make(rng, depth - 1),
        )
    if kind == "atleastunq":
        return AtLeastUnq(
            rng.choice(sorted(features.n_bounds)),
            random_basic_role(rng, features, role_names),
        )
    return LessUnq(
        rng.choice(sorted(features.n_bounds)),
        random_basic_role(rng, features, role_names),
    )
