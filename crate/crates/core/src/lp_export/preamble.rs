//! The shared preamble: connective encodings, proof combinators for each
//! kernel rule, and binary integers.

use std::collections::HashMap;
use std::sync::OnceLock;

use super::term::{app, apps, arrow, cst, lam, pi, LpDoc, LpItem, LpTerm};

/// Module name used by emitted files.
pub const PREAMBLE_MODULE: &str = "certforge_preamble";

/// `Π C : Type, C`
pub fn bot() -> LpTerm {
    pi("C", LpTerm::Type, |c| c)
}

/// `⊥ → ⊥`
pub fn top() -> LpTerm {
    arrow(bot(), bot())
}

pub fn neg(t: LpTerm) -> LpTerm {
    arrow(t, bot())
}

/// `Π C : Type, (a → b → C) → C`
pub fn and(a: LpTerm, b: LpTerm) -> LpTerm {
    pi("C", LpTerm::Type, |c| arrow(arrow(a, arrow(b, c.clone())), c))
}

/// `Π C : Type, (a → C) → (b → C) → C`
pub fn or(a: LpTerm, b: LpTerm) -> LpTerm {
    pi("C", LpTerm::Type, |c| {
        arrow(arrow(a, c.clone()), arrow(arrow(b, c.clone()), c))
    })
}

/// `Π C : Type, (Π x : τ, body x → C) → C`
pub fn ex(hint: &str, tau: LpTerm, body: impl FnOnce(LpTerm) -> LpTerm) -> LpTerm {
    pi("C", LpTerm::Type, |c| {
        arrow(pi(hint, tau, |x| arrow(body(x), c.clone())), c)
    })
}

/// Leibniz equality, written out: `Π Q : τ → Type, Q a → Q b`.
pub fn leibniz(tau: LpTerm, a: LpTerm, b: LpTerm) -> LpTerm {
    pi("Q", arrow(tau, LpTerm::Type), |q| {
        arrow(app(q.clone(), a), app(q, b))
    })
}

pub struct Combinator {
    pub name: &'static str,
    pub ty: LpTerm,
    pub def: Option<LpTerm>,
}

fn ty() -> LpTerm {
    LpTerm::Type
}

fn int() -> LpTerm {
    cst("int")
}

fn pred(tau: &LpTerm) -> LpTerm {
    arrow(tau.clone(), ty())
}

fn nnpp(t: LpTerm, nn: LpTerm) -> LpTerm {
    apps(cst("nnpp"), [t, nn])
}

fn build() -> Vec<Combinator> {
    let mut out = Vec::new();
    let mut def = |name: &'static str, ty: LpTerm, def: Option<LpTerm>| {
        out.push(Combinator { name, ty, def });
    };

    def(
        "em",
        pi("t", ty(), |t| or(t.clone(), neg(t))),
        None,
    );
    def(
        "nnpp",
        pi("t", ty(), |t| arrow(neg(neg(t.clone())), t)),
        Some(lam("t", ty(), |t| {
            lam("nn", neg(neg(t.clone())), |nn| {
                apps(
                    cst("em"),
                    [
                        t.clone(),
                        t.clone(),
                        lam("x", t.clone(), |x| x),
                        lam("nx", neg(t.clone()), |nx| apps(nn, [nx, t])),
                    ],
                )
            })
        })),
    );
    def(
        "trivial_hyp",
        arrow(bot(), bot()),
        Some(lam("h", bot(), |h| h)),
    );
    def(
        "trivial_goal",
        arrow(neg(top()), bot()),
        Some(lam("g", neg(top()), |g| app(g, lam("c", bot(), |c| c)))),
    );
    def(
        "axiom",
        pi("t", ty(), |t| arrow(t.clone(), arrow(neg(t), bot()))),
        Some(lam("t", ty(), |t| {
            lam("h", t.clone(), |h| lam("g", neg(t), |g| app(g, h)))
        })),
    );
    def(
        "swap_hyp",
        pi("t", ty(), |t| {
            arrow(arrow(neg(t.clone()), bot()), arrow(neg(t), bot()))
        }),
        Some(lam("t", ty(), |t| {
            lam("k", arrow(neg(t.clone()), bot()), |k| {
                lam("h", neg(t), |h| app(k, h))
            })
        })),
    );
    def(
        "swap_goal",
        pi("t", ty(), |t| {
            arrow(arrow(t.clone(), bot()), arrow(neg(neg(t)), bot()))
        }),
        Some(lam("t", ty(), |t| {
            lam("k", arrow(t.clone(), bot()), |k| {
                lam("g", neg(neg(t)), |g| app(g, k))
            })
        })),
    );
    def(
        "unfold_imp_hyp",
        pi("a", ty(), |a| {
            pi("b", ty(), |b| {
                arrow(
                    arrow(or(neg(a.clone()), b.clone()), bot()),
                    arrow(arrow(a, b), bot()),
                )
            })
        }),
        Some(lam("a", ty(), |a| {
            lam("b", ty(), |b| {
                lam("k", arrow(or(neg(a.clone()), b.clone()), bot()), |k| {
                    lam("h", arrow(a.clone(), b.clone()), |h| {
                        let o = lam("C", ty(), |c| {
                            lam("l", arrow(neg(a.clone()), c.clone()), |l| {
                                lam("r", arrow(b.clone(), c.clone()), |r| {
                                    apps(
                                        cst("em"),
                                        [a.clone(), c, lam("x", a.clone(), |x| app(r, app(h, x))), l],
                                    )
                                })
                            })
                        });
                        app(k, o)
                    })
                })
            })
        })),
    );
    def(
        "unfold_imp_goal",
        pi("a", ty(), |a| {
            pi("b", ty(), |b| {
                arrow(
                    arrow(neg(or(neg(a.clone()), b.clone())), bot()),
                    arrow(neg(arrow(a, b)), bot()),
                )
            })
        }),
        Some(lam("a", ty(), |a| {
            lam("b", ty(), |b| {
                lam("k", arrow(neg(or(neg(a.clone()), b.clone())), bot()), |k| {
                    lam("g", neg(arrow(a.clone(), b.clone())), |g| {
                        let refute = lam("o", or(neg(a.clone()), b.clone()), |o| {
                            app(
                                g,
                                lam("x", a.clone(), |x| {
                                    apps(
                                        o,
                                        [
                                            b.clone(),
                                            lam("na", neg(a.clone()), |na| apps(na, [x, b.clone()])),
                                            lam("y", b.clone(), |y| y),
                                        ],
                                    )
                                }),
                            )
                        });
                        app(k, refute)
                    })
                })
            })
        })),
    );
    def(
        "cut",
        pi("t", ty(), |t| {
            arrow(arrow(neg(t.clone()), bot()), arrow(arrow(t, bot()), bot()))
        }),
        Some(lam("t", ty(), |t| {
            lam("k1", arrow(neg(t.clone()), bot()), |k1| {
                lam("k2", arrow(t, bot()), |k2| app(k1, k2))
            })
        })),
    );
    def(
        "split",
        pi("a", ty(), |a| {
            pi("b", ty(), |b| {
                arrow(
                    arrow(a.clone(), bot()),
                    arrow(arrow(b.clone(), bot()), arrow(or(a, b), bot())),
                )
            })
        }),
        Some(lam("a", ty(), |a| {
            lam("b", ty(), |b| {
                lam("k1", arrow(a.clone(), bot()), |k1| {
                    lam("k2", arrow(b.clone(), bot()), |k2| {
                        lam("d", or(a, b), |d| apps(d, [bot(), k1, k2]))
                    })
                })
            })
        })),
    );
    def(
        "split_goal",
        pi("a", ty(), |a| {
            pi("b", ty(), |b| {
                arrow(
                    arrow(neg(a.clone()), bot()),
                    arrow(arrow(neg(b.clone()), bot()), arrow(neg(and(a, b)), bot())),
                )
            })
        }),
        Some(lam("a", ty(), |a| {
            lam("b", ty(), |b| {
                lam("k1", arrow(neg(a.clone()), bot()), |k1| {
                    lam("k2", arrow(neg(b.clone()), bot()), |k2| {
                        lam("g", neg(and(a.clone(), b.clone())), |g| {
                            app(
                                k1,
                                lam("x", a.clone(), |x| {
                                    app(
                                        k2,
                                        lam("y", b.clone(), |y| {
                                            app(
                                                g,
                                                lam("C", ty(), |c| {
                                                    lam("f", arrow(a, arrow(b, c)), |f| apps(f, [x, y]))
                                                }),
                                            )
                                        }),
                                    )
                                }),
                            )
                        })
                    })
                })
            })
        })),
    );
    def(
        "destruct_hyp",
        pi("a", ty(), |a| {
            pi("b", ty(), |b| {
                arrow(
                    arrow(a.clone(), arrow(b.clone(), bot())),
                    arrow(and(a, b), bot()),
                )
            })
        }),
        Some(lam("a", ty(), |a| {
            lam("b", ty(), |b| {
                lam("k", arrow(a.clone(), arrow(b.clone(), bot())), |k| {
                    lam("h", and(a, b), |h| apps(h, [bot(), k]))
                })
            })
        })),
    );
    def(
        "destruct_goal",
        pi("a", ty(), |a| {
            pi("b", ty(), |b| {
                arrow(
                    arrow(neg(a.clone()), arrow(neg(b.clone()), bot())),
                    arrow(neg(or(a, b)), bot()),
                )
            })
        }),
        Some(lam("a", ty(), |a| {
            lam("b", ty(), |b| {
                lam("k", arrow(neg(a.clone()), arrow(neg(b.clone()), bot())), |k| {
                    lam("g", neg(or(a.clone(), b.clone())), |g| {
                        let inj = |left: bool| {
                            let (a, b, g) = (a.clone(), b.clone(), g.clone());
                            let (dom, hint) = if left { (a.clone(), "x") } else { (b.clone(), "y") };
                            lam(hint, dom, move |v| {
                                app(
                                    g,
                                    lam("C", ty(), |c| {
                                        lam("l", arrow(a, c.clone()), |l| {
                                            lam("r", arrow(b, c), |r| app(if left { l } else { r }, v))
                                        })
                                    }),
                                )
                            })
                        };
                        apps(k, [inj(true), inj(false)])
                    })
                })
            })
        })),
    );
    def(
        "intro_forall",
        pi("T", ty(), |tau| {
            pi("b", pred(&tau), |b| {
                arrow(
                    pi("x", tau.clone(), |x| arrow(neg(app(b.clone(), x)), bot())),
                    arrow(neg(pi("x", tau, |x| app(b, x))), bot()),
                )
            })
        }),
        Some(lam("T", ty(), |tau| {
            lam("b", pred(&tau), |b| {
                lam(
                    "k",
                    pi("x", tau.clone(), |x| arrow(neg(app(b.clone(), x)), bot())),
                    |k| {
                        lam("g", neg(pi("x", tau.clone(), |x| app(b.clone(), x))), |g| {
                            app(
                                g,
                                lam("x", tau, |x| nnpp(app(b, x.clone()), app(k, x))),
                            )
                        })
                    },
                )
            })
        })),
    );
    def(
        "intro_exists",
        pi("T", ty(), |tau| {
            pi("b", pred(&tau), |b| {
                arrow(
                    pi("x", tau.clone(), |x| arrow(app(b.clone(), x), bot())),
                    arrow(ex("x", tau, |x| app(b, x)), bot()),
                )
            })
        }),
        Some(lam("T", ty(), |tau| {
            lam("b", pred(&tau), |b| {
                lam(
                    "k",
                    pi("x", tau.clone(), |x| arrow(app(b.clone(), x), bot())),
                    |k| {
                        lam("h", ex("x", tau, |x| app(b, x)), |h| apps(h, [bot(), k]))
                    },
                )
            })
        })),
    );
    def(
        "inst_forall",
        pi("T", ty(), |tau| {
            pi("b", pred(&tau), |b| {
                pi("u", tau.clone(), |u| {
                    arrow(
                        arrow(app(b.clone(), u), bot()),
                        arrow(pi("x", tau, |x| app(b, x)), bot()),
                    )
                })
            })
        }),
        Some(lam("T", ty(), |tau| {
            lam("b", pred(&tau), |b| {
                lam("u", tau.clone(), |u| {
                    lam("k", arrow(app(b.clone(), u.clone()), bot()), |k| {
                        lam("h", pi("x", tau, |x| app(b, x)), |h| app(k, app(h, u)))
                    })
                })
            })
        })),
    );
    def(
        "inst_exists",
        pi("T", ty(), |tau| {
            pi("b", pred(&tau), |b| {
                pi("u", tau.clone(), |u| {
                    arrow(
                        arrow(neg(app(b.clone(), u)), bot()),
                        arrow(neg(ex("x", tau, |x| app(b, x))), bot()),
                    )
                })
            })
        }),
        Some(lam("T", ty(), |tau| {
            lam("b", pred(&tau), |b| {
                lam("u", tau.clone(), |u| {
                    lam("k", arrow(neg(app(b.clone(), u.clone())), bot()), |k| {
                        lam("g", neg(ex("x", tau.clone(), |x| app(b.clone(), x))), |g| {
                            app(
                                k,
                                lam("p", app(b.clone(), u.clone()), |p| {
                                    app(
                                        g,
                                        lam("C", ty(), |c| {
                                            lam(
                                                "f",
                                                pi("x", tau, |x| arrow(app(b, x), c)),
                                                |f| apps(f, [u, p]),
                                            )
                                        }),
                                    )
                                }),
                            )
                        })
                    })
                })
            })
        })),
    );
    let family = || arrow(ty(), ty());
    def(
        "intro_type",
        pi("t", family(), |t| {
            arrow(
                pi("i", ty(), |i| arrow(neg(app(t.clone(), i)), bot())),
                arrow(neg(pi("a", ty(), |a| app(t, a))), bot()),
            )
        }),
        Some(lam("t", family(), |t| {
            lam(
                "k",
                pi("i", ty(), |i| arrow(neg(app(t.clone(), i)), bot())),
                |k| {
                    lam("g", neg(pi("a", ty(), |a| app(t.clone(), a))), |g| {
                        app(g, lam("a", ty(), |a| nnpp(app(t, a.clone()), app(k, a))))
                    })
                },
            )
        })),
    );
    def(
        "inst_type",
        pi("t", family(), |t| {
            pi("s", ty(), |s| {
                arrow(
                    arrow(app(t.clone(), s), bot()),
                    arrow(pi("a", ty(), |a| app(t, a)), bot()),
                )
            })
        }),
        Some(lam("t", family(), |t| {
            lam("s", ty(), |s| {
                lam("k", arrow(app(t.clone(), s.clone()), bot()), |k| {
                    lam("h", pi("a", ty(), |a| app(t, a)), |h| app(k, app(h, s)))
                })
            })
        })),
    );
    def(
        "eq",
        pi("T", ty(), |tau| arrow(tau.clone(), arrow(tau, ty()))),
        Some(lam("T", ty(), |tau| {
            lam("x", tau.clone(), |x| {
                lam("y", tau.clone(), |y| leibniz(tau, x, y))
            })
        })),
    );
    def(
        "refl_goal",
        pi("T", ty(), |tau| {
            pi("x", tau.clone(), |x| arrow(neg(apps(cst("eq"), [tau, x.clone(), x])), bot()))
        }),
        Some(lam("T", ty(), |tau| {
            lam("x", tau.clone(), |x| {
                lam("g", neg(apps(cst("eq"), [tau.clone(), x.clone(), x.clone()])), |g| {
                    app(
                        g,
                        lam("Q", pred(&tau), |q| lam("q", app(q, x), |q| q)),
                    )
                })
            })
        })),
    );
    let eq = |tau: &LpTerm, a: &LpTerm, b: &LpTerm| apps(cst("eq"), [tau.clone(), a.clone(), b.clone()]);
    def(
        "rewrite_hyp",
        pi("T", ty(), |tau| {
            pi("l", tau.clone(), |l| {
                pi("r", tau.clone(), |r| {
                    pi("c", pred(&tau), |c| {
                        arrow(
                            arrow(app(c.clone(), r.clone()), bot()),
                            arrow(eq(&tau, &l, &r), arrow(app(c, l), bot())),
                        )
                    })
                })
            })
        }),
        Some(lam("T", ty(), |tau| {
            lam("l", tau.clone(), |l| {
                lam("r", tau.clone(), |r| {
                    lam("c", pred(&tau), |c| {
                        lam("k", arrow(app(c.clone(), r.clone()), bot()), |k| {
                            lam("e", eq(&tau, &l, &r), |e| {
                                lam("p", app(c.clone(), l), |p| app(k, apps(e, [c, p])))
                            })
                        })
                    })
                })
            })
        })),
    );
    def(
        "rewrite_goal",
        pi("T", ty(), |tau| {
            pi("l", tau.clone(), |l| {
                pi("r", tau.clone(), |r| {
                    pi("c", pred(&tau), |c| {
                        arrow(
                            arrow(neg(app(c.clone(), r.clone())), bot()),
                            arrow(eq(&tau, &l, &r), arrow(neg(app(c, l)), bot())),
                        )
                    })
                })
            })
        }),
        Some(lam("T", ty(), |tau| {
            lam("l", tau.clone(), |l| {
                lam("r", tau.clone(), |r| {
                    lam("c", pred(&tau), |c| {
                        lam("k", arrow(neg(app(c.clone(), r.clone())), bot()), |k| {
                            lam("e", eq(&tau, &l, &r), |e| {
                                lam("g", neg(app(c.clone(), l.clone())), |g| {
                                    let back = lam("z", tau.clone(), |z| {
                                        arrow(app(c.clone(), z), app(c.clone(), l.clone()))
                                    });
                                    app(
                                        k,
                                        lam("y", app(c.clone(), r), |y| {
                                            app(
                                                g,
                                                apps(e, [back, lam("w", app(c, l), |w| w), y]),
                                            )
                                        }),
                                    )
                                })
                            })
                        })
                    })
                })
            })
        })),
    );
    let le = |a: LpTerm, b: LpTerm| apps(cst("le"), [a, b]);
    let gt = |a: LpTerm, b: LpTerm| apps(cst("gt"), [a, b]);
    let lt = |a: LpTerm, b: LpTerm| apps(cst("lt"), [a, b]);
    let below = |b: &LpTerm, i: &LpTerm| {
        let (b, i) = (b.clone(), i.clone());
        pi("n", int(), |n| arrow(lt(n.clone(), i), app(b, n)))
    };
    def(
        "zind",
        pi("a", int(), |a| {
            pi("b", pred(&int()), |b| {
                arrow(
                    pi("i", int(), |i| arrow(le(i.clone(), a.clone()), app(b.clone(), i))),
                    arrow(
                        pi("i", int(), |i| {
                            arrow(gt(i.clone(), a), arrow(below(&b, &i), app(b.clone(), i)))
                        }),
                        pi("i", int(), |i| app(b, i)),
                    ),
                )
            })
        }),
        None,
    );
    let base_k = |a: &LpTerm, b: &LpTerm| {
        let (a, b) = (a.clone(), b.clone());
        pi("i", int(), |i| {
            arrow(neg(app(b, i.clone())), arrow(le(i, a), bot()))
        })
    };
    let step_k = |a: &LpTerm, b: &LpTerm| {
        let (a, b) = (a.clone(), b.clone());
        pi("i", int(), |i| {
            arrow(
                neg(app(b.clone(), i.clone())),
                arrow(gt(i.clone(), a), arrow(below(&b, &i), bot())),
            )
        })
    };
    def(
        "induction",
        pi("a", int(), |a| {
            pi("b", pred(&int()), |b| {
                arrow(
                    base_k(&a, &b),
                    arrow(
                        step_k(&a, &b),
                        pi("i", int(), |i| arrow(neg(app(b, i)), bot())),
                    ),
                )
            })
        }),
        Some(lam("a", int(), |a| {
            lam("b", pred(&int()), |b| {
                lam("kb", base_k(&a, &b), |kb| {
                    lam("ks", step_k(&a, &b), |ks| {
                        lam("i", int(), |i| {
                            lam("g", neg(app(b.clone(), i.clone())), |g| {
                                let base = lam("j", int(), |j| {
                                    lam("hi", le(j.clone(), a.clone()), |hi| {
                                        nnpp(
                                            app(b.clone(), j.clone()),
                                            lam("gj", neg(app(b.clone(), j.clone())), |gj| {
                                                apps(kb, [j, gj, hi])
                                            }),
                                        )
                                    })
                                });
                                let step = lam("j", int(), |j| {
                                    lam("hi", gt(j.clone(), a.clone()), |hi| {
                                        lam("hr", below(&b, &j), |hr| {
                                            nnpp(
                                                app(b.clone(), j.clone()),
                                                lam("gj", neg(app(b.clone(), j.clone())), |gj| {
                                                    apps(ks, [j, gj, hi, hr])
                                                }),
                                            )
                                        })
                                    })
                                });
                                app(g, apps(cst("zind"), [a, b, base, step, i]))
                            })
                        })
                    })
                })
            })
        })),
    );
    out
}

fn table() -> &'static HashMap<&'static str, Combinator> {
    static TABLE: OnceLock<HashMap<&'static str, Combinator>> = OnceLock::new();
    TABLE.get_or_init(|| build().into_iter().map(|c| (c.name, c)).collect())
}

/// The combinator `name` applied to `args`. With `inline`, the definition
/// is unfolded and reduced instead; this is how combinators are used at
/// types that are not in `Type` (a combinator's type parameter ranges over
/// `Type` only). The definitions never mention `eq` in their bodies, so
/// unfolding them at such types stays well typed.
pub(crate) fn use_combinator(name: &str, inline: bool, args: Vec<LpTerm>) -> LpTerm {
    if inline {
        let def = table()
            .get(name)
            .and_then(|c| c.def.as_ref())
            .unwrap_or_else(|| panic!("combinator `{name}` has no definition"));
        def.instantiate(&args)
    } else {
        apps(cst(name), args)
    }
}

const INT_DECLS: &[(&str, &str)] = &[
    ("pos", "Type"),
    ("xH", "pos"),
    ("xO", "pos → pos"),
    ("xI", "pos → pos"),
    ("int", "Type"),
    ("Z0", "int"),
    ("Zpos", "pos → int"),
    ("Zneg", "pos → int"),
    ("comparison", "Type"),
    ("Lt", "comparison"),
    ("Eq", "comparison"),
    ("Gt", "comparison"),
    ("pos_succ", "pos → pos"),
    ("pos_add", "pos → pos → pos"),
    ("pos_add_carry", "pos → pos → pos"),
    ("pos_mul", "pos → pos → pos"),
    ("pos_pred_double", "pos → pos"),
    ("pos_compare", "comparison → pos → pos → comparison"),
    ("cmp_opp", "comparison → comparison"),
    ("z_double", "int → int"),
    ("z_succ_double", "int → int"),
    ("z_pred_double", "int → int"),
    ("pos_sub", "pos → pos → int"),
    ("opp", "int → int"),
    ("add", "int → int → int"),
    ("mul", "int → int → int"),
    ("compare", "int → int → comparison"),
    ("is_lt", "comparison → Type"),
    ("is_gt", "comparison → Type"),
];

const INT_RULES: &[&str] = &[
    "pos_succ (xI $p) ↪ xO (pos_succ $p)",
    "pos_succ (xO $p) ↪ xI $p",
    "pos_succ xH ↪ xO xH",
    "pos_add (xI $p) (xI $q) ↪ xO (pos_add_carry $p $q)",
    "pos_add (xI $p) (xO $q) ↪ xI (pos_add $p $q)",
    "pos_add (xI $p) xH ↪ xO (pos_succ $p)",
    "pos_add (xO $p) (xI $q) ↪ xI (pos_add $p $q)",
    "pos_add (xO $p) (xO $q) ↪ xO (pos_add $p $q)",
    "pos_add (xO $p) xH ↪ xI $p",
    "pos_add xH (xI $q) ↪ xO (pos_succ $q)",
    "pos_add xH (xO $q) ↪ xI $q",
    "pos_add xH xH ↪ xO xH",
    "pos_add_carry (xI $p) (xI $q) ↪ xI (pos_add_carry $p $q)",
    "pos_add_carry (xI $p) (xO $q) ↪ xO (pos_add_carry $p $q)",
    "pos_add_carry (xI $p) xH ↪ xI (pos_succ $p)",
    "pos_add_carry (xO $p) (xI $q) ↪ xO (pos_add_carry $p $q)",
    "pos_add_carry (xO $p) (xO $q) ↪ xI (pos_add $p $q)",
    "pos_add_carry (xO $p) xH ↪ xO (pos_succ $p)",
    "pos_add_carry xH (xI $q) ↪ xI (pos_succ $q)",
    "pos_add_carry xH (xO $q) ↪ xO (pos_succ $q)",
    "pos_add_carry xH xH ↪ xI xH",
    "pos_mul (xI $p) $q ↪ pos_add $q (xO (pos_mul $p $q))",
    "pos_mul (xO $p) $q ↪ xO (pos_mul $p $q)",
    "pos_mul xH $q ↪ $q",
    "pos_pred_double (xI $p) ↪ xI (xO $p)",
    "pos_pred_double (xO $p) ↪ xI (pos_pred_double $p)",
    "pos_pred_double xH ↪ xH",
    "pos_compare $r (xI $p) (xI $q) ↪ pos_compare $r $p $q",
    "pos_compare $r (xI $p) (xO $q) ↪ pos_compare Gt $p $q",
    "pos_compare $r (xI $p) xH ↪ Gt",
    "pos_compare $r (xO $p) (xI $q) ↪ pos_compare Lt $p $q",
    "pos_compare $r (xO $p) (xO $q) ↪ pos_compare $r $p $q",
    "pos_compare $r (xO $p) xH ↪ Gt",
    "pos_compare $r xH (xI $q) ↪ Lt",
    "pos_compare $r xH (xO $q) ↪ Lt",
    "pos_compare $r xH xH ↪ $r",
    "cmp_opp Lt ↪ Gt",
    "cmp_opp Eq ↪ Eq",
    "cmp_opp Gt ↪ Lt",
    "z_double Z0 ↪ Z0",
    "z_double (Zpos $p) ↪ Zpos (xO $p)",
    "z_double (Zneg $p) ↪ Zneg (xO $p)",
    "z_succ_double Z0 ↪ Zpos xH",
    "z_succ_double (Zpos $p) ↪ Zpos (xI $p)",
    "z_succ_double (Zneg $p) ↪ Zneg (pos_pred_double $p)",
    "z_pred_double Z0 ↪ Zneg xH",
    "z_pred_double (Zpos $p) ↪ Zpos (pos_pred_double $p)",
    "z_pred_double (Zneg $p) ↪ Zneg (xI $p)",
    "pos_sub (xI $p) (xI $q) ↪ z_double (pos_sub $p $q)",
    "pos_sub (xI $p) (xO $q) ↪ z_succ_double (pos_sub $p $q)",
    "pos_sub (xI $p) xH ↪ Zpos (xO $p)",
    "pos_sub (xO $p) (xI $q) ↪ z_pred_double (pos_sub $p $q)",
    "pos_sub (xO $p) (xO $q) ↪ z_double (pos_sub $p $q)",
    "pos_sub (xO $p) xH ↪ Zpos (pos_pred_double $p)",
    "pos_sub xH (xI $q) ↪ Zneg (xO $q)",
    "pos_sub xH (xO $q) ↪ Zneg (pos_pred_double $q)",
    "pos_sub xH xH ↪ Z0",
    "opp Z0 ↪ Z0",
    "opp (Zpos $p) ↪ Zneg $p",
    "opp (Zneg $p) ↪ Zpos $p",
    "add Z0 $y ↪ $y",
    "add (Zpos $x) Z0 ↪ Zpos $x",
    "add (Zneg $x) Z0 ↪ Zneg $x",
    "add (Zpos $x) (Zpos $y) ↪ Zpos (pos_add $x $y)",
    "add (Zpos $x) (Zneg $y) ↪ pos_sub $x $y",
    "add (Zneg $x) (Zpos $y) ↪ pos_sub $y $x",
    "add (Zneg $x) (Zneg $y) ↪ Zneg (pos_add $x $y)",
    "mul Z0 $y ↪ Z0",
    "mul (Zpos $x) Z0 ↪ Z0",
    "mul (Zneg $x) Z0 ↪ Z0",
    "mul (Zpos $x) (Zpos $y) ↪ Zpos (pos_mul $x $y)",
    "mul (Zpos $x) (Zneg $y) ↪ Zneg (pos_mul $x $y)",
    "mul (Zneg $x) (Zpos $y) ↪ Zneg (pos_mul $x $y)",
    "mul (Zneg $x) (Zneg $y) ↪ Zpos (pos_mul $x $y)",
    "compare Z0 Z0 ↪ Eq",
    "compare Z0 (Zpos $y) ↪ Lt",
    "compare Z0 (Zneg $y) ↪ Gt",
    "compare (Zpos $x) Z0 ↪ Gt",
    "compare (Zpos $x) (Zpos $y) ↪ pos_compare Eq $x $y",
    "compare (Zpos $x) (Zneg $y) ↪ Gt",
    "compare (Zneg $x) Z0 ↪ Lt",
    "compare (Zneg $x) (Zpos $y) ↪ Lt",
    "compare (Zneg $x) (Zneg $y) ↪ cmp_opp (pos_compare Eq $x $y)",
    "is_lt Lt ↪ top",
    "is_lt Eq ↪ bot",
    "is_lt Gt ↪ bot",
    "is_gt Lt ↪ bot",
    "is_gt Eq ↪ bot",
    "is_gt Gt ↪ top",
];

/// Integer definitions that are plain abbreviations.
fn int_defs() -> Vec<(&'static str, LpTerm, LpTerm)> {
    let binop = || arrow(int(), arrow(int(), int()));
    let rel = || arrow(int(), arrow(int(), ty()));
    let by = |f: fn(LpTerm, LpTerm) -> LpTerm| {
        lam("x", int(), move |x| lam("y", int(), move |y| f(x, y)))
    };
    vec![
        ("sub", binop(), by(|x, y| apps(cst("add"), [x, app(cst("opp"), y)]))),
        ("lt", rel(), by(|x, y| app(cst("is_lt"), apps(cst("compare"), [x, y])))),
        ("gt", rel(), by(|x, y| app(cst("is_gt"), apps(cst("compare"), [x, y])))),
        ("le", rel(), by(|x, y| neg(app(cst("is_gt"), apps(cst("compare"), [x, y]))))),
        ("ge", rel(), by(|x, y| neg(app(cst("is_lt"), apps(cst("compare"), [x, y]))))),
    ]
}

/// The preamble as a document.
pub fn preamble_doc() -> LpDoc {
    let mut doc = LpDoc::default();
    doc.comment(
        "certforge preamble, in Calculus of Constructions notation.\n\
         Propositions are types; a task is the type of its refutations.",
    );
    doc.symbol("bot", LpTerm::Type, Some(bot()));
    doc.symbol("top", LpTerm::Type, Some(top()));
    let unary = arrow(ty(), ty());
    let binary = arrow(ty(), arrow(ty(), ty()));
    doc.symbol("not", unary, Some(lam("a", ty(), neg)));
    doc.symbol(
        "and",
        binary.clone(),
        Some(lam("a", ty(), |a| lam("b", ty(), |b| and(a, b)))),
    );
    doc.symbol(
        "or",
        binary,
        Some(lam("a", ty(), |a| lam("b", ty(), |b| or(a, b)))),
    );
    doc.comment("Binary integers.");
    for (name, t) in INT_DECLS {
        let ty = super::term::parse_term(t).expect("valid preamble type");
        doc.symbol(name, ty, None);
    }
    for r in INT_RULES {
        doc.items.push(LpItem::Rule(r.to_string()));
    }
    for (name, ty, def) in int_defs() {
        doc.symbol(name, ty, Some(def));
    }
    doc.comment("One combinator per kernel rule; continuations come first.");
    for c in build() {
        doc.symbol(c.name, c.ty, c.def);
    }
    doc
}

/// The preamble text.
pub fn emit_preamble() -> String {
    preamble_doc().render()
}

/// Names declared by the preamble.
pub fn preamble_names() -> Vec<String> {
    preamble_doc()
        .items
        .into_iter()
        .filter_map(|i| match i {
            LpItem::Symbol { name, .. } => Some(name),
            _ => None,
        })
        .collect()
}
