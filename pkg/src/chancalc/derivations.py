"""Step-by-step disintegration derivations, each step an explicit channel
expression built from generators, ``nrm`` and daggers.

Consecutive steps are meant to be equal; feed them to
:func:`chancalc.inference.verify_derivation`.
"""
from __future__ import annotations

from .channel import (
    Channel,
    comparator,
    comparator_multi,
    compose,
    copy,
    discard,
    identity,
    nrm,
    seq,
    state,
    swap,
    tensor,
    wiring,
)
from .disint import dagger_channel, dagger_state
from .kernel import flip
from .netmodel import AND, BOOL, FAULT_TREE_LEAVES, OR, child_channels, child_prior


def extend(joint: Channel, f: Channel, wires: list[int]) -> Channel:
    """Append ``f``'s output, fed from copies of the wires ``wires`` of ``joint``."""
    n = len(joint.outputs)
    fan = wiring(joint.outputs, [*range(n), *wires])
    return seq(joint, fan, tensor(identity(joint.outputs), f))


def bend(evidence, joint: Channel, ev: list[int], keep: list[int]) -> Channel:
    """Condition ``joint`` on evidence supplied on input wires.

    The evidence wires are capped against the joint wires ``ev``; the wires
    ``keep`` are returned, normalised.
    """
    evidence = tuple(evidence)
    ne = len(evidence)
    body = tensor(identity(evidence), joint)
    picks = [*range(ne), *(ne + p for p in ev), *(ne + p for p in keep)]
    body = compose(body, wiring(body.outputs, picks))
    cap_e = compose(comparator_multi(evidence), discard(evidence))
    kept = tuple(joint.outputs[p] for p in keep)
    return nrm(compose(body, tensor(cap_e, identity(kept))))


# -- fault tree ---------------------------------------------------------------

def fault_tree_steps() -> list[tuple[str, Channel]]:
    """Conditioning the or-gate wire G1 and reading the top event TOP."""
    a, b, c, e = (state(flip(FAULT_TREE_LEAVES[n])) for n in "ABCE")
    idb = identity(BOOL)
    or_a = compose(tensor(a, idb), OR)                # oc ∘ (flip(1/2) ⊗ id)
    d = dagger_state(or_a, b)                         # G1 -> B
    # (G1, B) -> TOP:  (G1 ∧ (B ∨ C)) ∧ E
    or_c = compose(tensor(idb, c), OR)
    h = seq(tensor(idb, or_c), AND, tensor(idb, e), AND)

    # full joint; leaves A B C E, then G1 G2 G3 TOP appended
    tau = tensor(a, b, c, e)
    tau = extend(tau, OR, [0, 1])     # G1 = A ∨ B
    tau = extend(tau, OR, [1, 2])     # G2 = B ∨ C
    tau = extend(tau, AND, [4, 5])    # G3 = G1 ∧ G2
    tau = extend(tau, AND, [6, 3])    # TOP = G3 ∧ E
    tau = compose(tau, wiring(tau.outputs, [0, 4, 1, 6, 7, 5, 2, 3]))  # A G1 B G3 TOP G2 C E

    mu = seq(b, copy(BOOL), tensor(or_a, idb))                       # state on (G1, B)
    joint_g1_top = seq(mu, wiring(mu.outputs, [0, 0, 1]), tensor(idb, h))
    mu_dagger = seq(b, or_a, copy(BOOL), tensor(idb, d))             # dagger equation
    g1_marg = compose(b, or_a)

    def boxed(joint):
        return compose(tensor(idb, joint), tensor(comparator(BOOL), idb))

    return [
        ("tau", bend([BOOL], tau, [1], [4])),
        ("(a) unpacked, discarded wires removed", bend([BOOL], joint_g1_top, [0], [1])),
        ("(b) gates pulled out of the box", compose(nrm(boxed(mu)), h)),
        ("(c) dagger d introduced", compose(nrm(boxed(mu_dagger)), h)),
        ("(d) d pulled out of the box",
         seq(nrm(compose(tensor(idb, g1_marg), comparator(BOOL))), copy(BOOL), tensor(idb, d), h)),
        ("(e) box removed", seq(copy(BOOL), tensor(idb, d), h)),
    ]


def fault_tree_dagger() -> Channel:
    a, b = state(flip(FAULT_TREE_LEAVES["A"])), state(flip(FAULT_TREE_LEAVES["B"]))
    return dagger_state(compose(tensor(a, identity(BOOL)), OR), b)


# -- Child --------------------------------------------------------------------

def child_abbreviations():
    """``alpha``: joint state on LP ⊗ DF ⊗ CM.  ``c``: CO -> LP ⊗ DF ⊗ CM,
    the inversion of the CO reading at prior ``alpha``.  ``f``: the HD
    reading LP ⊗ DF ⊗ CM -> HD."""
    ch = child_channels()
    di = ch["d"].outputs
    lp, df, cm = (ch[k] for k in ("lp", "df", "cm"))
    LP, DF, CM = lp.outputs[0], df.outputs[0], cm.outputs[0]
    alpha = seq(state(child_prior()), ch["d"], copy(di, 3), tensor(lp, df, cm))
    read_co = compose(tensor(identity(LP), discard((DF, CM))), ch["co"])
    c = dagger_state(read_co, alpha)
    f = compose(tensor(discard(LP), identity((DF, CM))), ch["hd"])
    return alpha, c, f, read_co


def child_steps() -> list[tuple[str, Channel]]:
    ch = child_channels()
    d, df, cm, lp, co, hd, hi, lb = (ch[k] for k in ("d", "df", "cm", "lp", "co", "hd", "hi", "lb"))
    DI = d.outputs[0]
    DF, CM, LP, CO, HD, HI = (x.outputs[0] for x in (df, cm, lp, co, hd, hi))
    alpha, c, f, read_co = child_abbreviations()

    # full joint on (HD, CO, LB), straight from the network
    dfcmlp = seq(state(child_prior()), d, copy(DI, 3), tensor(df, cm, lp))
    j = seq(dfcmlp, wiring(dfcmlp.outputs, [0, 1, 1, 2, 2]), tensor(hd, hi, co))   # HD HI CO
    j = seq(j, wiring(j.outputs, [0, 0, 1, 2]), tensor(identity(HD), lb, identity(CO)))
    joint = compose(j, wiring(j.outputs, [0, 2, 1]))                                 # HD CO LB

    # via alpha on LP ⊗ DF ⊗ CM
    s = seq(wiring(alpha.outputs, [1, 2, 0, 0, 2]), tensor(hd, co, identity(LP), identity(CM)))
    joint_alpha = seq(alpha, s)                                                       # HD CO LP CM
    u = compose(tensor(identity(HD), compose(swap(LP, CM), hi)), lb)                # HD LP CM -> LB

    # HD read off the LP ⊗ DF ⊗ CM wires, keeping LP and CM
    s2 = compose(wiring(alpha.outputs, [1, 2, 0, 2]), tensor(hd, identity(LP), identity(CM)))  # HD LP CM
    co_marg = compose(alpha, read_co)
    joint_dagger = seq(co_marg, copy(CO), tensor(identity(CO), compose(c, s2)))      # CO HD LP CM
    joint_dagger = compose(joint_dagger, wiring(joint_dagger.outputs, [1, 0, 2, 3]))  # HD CO LP CM

    ev = (HD, CO)
    removed_co = compose(tensor(identity(HD), compose(c, s2)),
                         tensor(comparator(HD), identity((LP, CM))))                 # HD CO -> HD LP CM
    cf = compose(c, f)
    f_dag = dagger_channel(f, c)                                                      # HD CO -> LP DF CM
    tail = seq(wiring(ev, [0, 0, 1]), tensor(identity(HD), f_dag),
               wiring((HD, LP, DF, CM), [0, 1, 3]), u)
    hd_box = seq(wiring(ev, [0, 1, 1]), tensor(identity(HD), cf, identity(CO)),
                 tensor(comparator(HD), identity(CO)))

    return [
        ("joint", bend(ev, joint, [0, 1], [2])),
        ("(a) joint through alpha", bend(ev, seq(joint_alpha, wiring(joint_alpha.outputs, [0, 1, 0, 2, 3]),
                                                 tensor(identity(HD), identity(CO), u)), [0, 1], [2])),
        ("(b) hi, lb pulled out of the box", compose(bend(ev, joint_alpha, [0, 1], [0, 2, 3]), u)),
        ("(c) dagger c of the CO reading at alpha", compose(bend(ev, joint_dagger, [0, 1], [0, 2, 3]), u)),
        ("(d) CO comparison removed (full support)", compose(nrm(removed_co), u)),
        ("(e) dagger of f at channel c, pulled out", compose(nrm(hd_box), tail)),
        ("(f) box removed", tail),
    ]


def child_final() -> Channel:
    return child_steps()[-1][1]
