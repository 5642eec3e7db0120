import random

from planeflow.expr import (
    Add,
    Constant,
    Exp,
    IntPower,
    Mul,
    Negate,
    Scale,
    Variable,
    compile_fn,
)


def random_expr(rng: random.Random, depth: int = 3):
    """Random tree in the supported class, kept numerically tame."""
    if depth <= 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return Variable()
        return Constant(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
    kind = rng.choice(("add", "mul", "neg", "exp", "pow", "scale"))
    if kind == "add":
        return Add(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == "mul":
        return Mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if kind == "neg":
        return Negate(random_expr(rng, depth - 1))
    if kind == "exp":
        # damp the argument so nested exponentials stay in range
        return Exp(Scale(complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4)),
                         random_expr(rng, depth - 1)))
    if kind == "pow":
        return IntPower(random_expr(rng, depth - 1), rng.randint(0, 3))
    return Scale(complex(rng.uniform(-2, 2), rng.uniform(-2, 2)),
                 random_expr(rng, depth - 1))


def tame_random_expr(rng: random.Random, points, depth: int = 3, cap: float = 1e4):
    """Random expression whose values stay below cap at the given points."""
    while True:
        expr = random_expr(rng, depth)
        try:
            fn = compile_fn(expr)
            if all(abs(fn(z)) < cap for z in points):
                return expr
        except Exception:
            continue
