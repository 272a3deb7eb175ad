//! Reports for the function, region, ideal and Urysohn commands.

use std::sync::Arc;

use serde_json::{json, Value};
use vlab::ideals::{BandStatus, IdealSpec, MemberVerdict, Sublattice};
use vlab::rational::{midpoint, zero, RatStr};
use vlab::report::{Certificate, Evidence, RegionPred, Report};
use vlab::seq::IncreasingSeqRule;
use vlab::urysohn;
use vlab::{Error, PLFun, PlOp, Rational, Region, Result, Space};

pub fn fn_eval(f: &PLFun, x: &Rational) -> Result<Report> {
    let v = f.eval(x)?;
    let cert = Certificate::new("value", &format!("f({x}) = {v}"), vec![Evidence::value_at(f, x, &v)?]);
    Ok(Report::from_certificates(
        "fn eval",
        json!({ "f": f, "x": RatStr(x.clone()) }),
        vec![cert],
        json!(RatStr(v)),
    ))
}

fn pointwise(op: PlOp, vals: &[Rational], scalar: Option<&Rational>) -> Rational {
    match op {
        PlOp::Add => &vals[0] + &vals[1],
        PlOp::Sub => &vals[0] - &vals[1],
        PlOp::Join => vals[0].clone().max(vals[1].clone()),
        PlOp::Meet => vals[0].clone().min(vals[1].clone()),
        PlOp::Scale => scalar.expect("checked by apply") * &vals[0],
        PlOp::Abs => vals[0].clone().max(-vals[0].clone()),
        PlOp::PosPart => vals[0].clone().max(zero()),
        PlOp::NegPart => (-vals[0].clone()).max(zero()),
    }
}

/// Applies `op` and checks the result against the pointwise definition at
/// every breakpoint of the operands and the result, and between them.
pub fn fn_op(op: PlOp, args: &[PLFun], scalar: Option<&Rational>) -> Result<Report> {
    let refs: Vec<&PLFun> = args.iter().collect();
    let out = op.apply(&refs, scalar)?;
    let space = out.space().clone();
    let mut ev = Vec::new();
    for ci in 0..space.len() {
        let mut xs: Vec<Rational> = args
            .iter()
            .chain(std::iter::once(&out))
            .flat_map(|g| g.breakpoints(ci).iter().map(|(x, _)| x.clone()))
            .collect();
        xs.sort();
        xs.dedup();
        let mids: Vec<Rational> = xs.windows(2).map(|w| midpoint(&w[0], &w[1])).collect();
        xs.extend(mids);
        xs.sort();
        for x in xs {
            let vals = args.iter().map(|g| g.eval(&x)).collect::<Result<Vec<_>>>()?;
            ev.push(Evidence::value_at(&out, &x, &pointwise(op, &vals, scalar))?);
        }
    }
    let cert = Certificate::new("pointwise", &format!("the result agrees with {op:?} pointwise"), ev);
    Ok(Report::from_certificates(
        &format!("fn {op:?}").to_lowercase(),
        json!({ "args": args, "scalar": scalar.map(|c| RatStr(c.clone())) }),
        vec![cert],
        json!(out),
    ))
}

pub const REGION_PREDICATES: &[(&str, RegionPred)] = &[
    ("is-open", RegionPred::Open),
    ("is-closed", RegionPred::Closed),
    ("is-clopen", RegionPred::Clopen),
    ("is-regular-open", RegionPred::RegularOpen),
    ("is-dense", RegionPred::Dense),
    ("is-empty", RegionPred::Empty),
];

fn operands<'a>(name: &str, args: &'a [Region], n: usize) -> Result<&'a [Region]> {
    if args.len() != n {
        return Err(Error::PreconditionViolated(format!("{name} takes {n} region(s), got {}", args.len())));
    }
    Ok(args)
}

/// Evaluates a region operation or predicate with characterizing facts.
pub fn region(name: &str, args: &[Region]) -> Result<Report> {
    if let Some((_, pred)) = REGION_PREDICATES.iter().find(|(n, _)| *n == name) {
        let a = &operands(name, args, 1)?[0];
        let holds = pred.eval(a);
        let ev = Evidence::region_has(a, *pred);
        let cert = Certificate::new(name, &format!("{a} satisfies {name}"), vec![ev]);
        return Ok(Report::answer(
            &format!("region {name}"),
            json!({ "regions": args }),
            vec![cert],
            holds,
            json!(holds),
        ));
    }
    let (out, ev) = match name {
        "union" | "intersect" | "difference" | "ro-join" => {
            let ab = operands(name, args, 2)?;
            let (a, b) = (&ab[0], &ab[1]);
            match name {
                "union" => {
                    let r = a.union(b)?;
                    let ev = vec![
                        Evidence::region_subset(a, &r)?,
                        Evidence::region_subset(b, &r)?,
                        Evidence::region_subset(&r.difference(a)?, b)?,
                    ];
                    (r, ev)
                }
                "intersect" => {
                    let r = a.intersect(b)?;
                    let ev = vec![
                        Evidence::region_subset(&r, a)?,
                        Evidence::region_subset(&r, b)?,
                        Evidence::region_subset(&a.difference(&r)?, &b.complement())?,
                    ];
                    (r, ev)
                }
                "difference" => {
                    let r = a.difference(b)?;
                    let ev = vec![
                        Evidence::region_subset(&r, a)?,
                        Evidence::region_subset(&r, &b.complement())?,
                        Evidence::region_subset(&a.difference(&r)?, b)?,
                    ];
                    (r, ev)
                }
                _ => {
                    let r = a.ro_join(b)?;
                    let ev = vec![
                        Evidence::region_has(&r, RegionPred::RegularOpen),
                        Evidence::region_subset(a, &r)?,
                        Evidence::region_subset(b, &r)?,
                        Evidence::region_eq(&r, &a.union(b)?.closure().interior()),
                    ];
                    (r, ev)
                }
            }
        }
        "complement" | "interior" | "closure" | "boundary" | "regularization" => {
            let a = &operands(name, args, 1)?[0];
            match name {
                "complement" => {
                    let r = a.complement();
                    let ev = vec![
                        Evidence::region_has(&r.intersect(a)?, RegionPred::Empty),
                        Evidence::region_eq(&r.union(a)?, &Region::full(a.space())),
                    ];
                    (r, ev)
                }
                "interior" => {
                    let r = a.interior();
                    let ev = vec![
                        Evidence::region_has(&r, RegionPred::Open),
                        Evidence::region_subset(&r, a)?,
                        Evidence::region_eq(&r, &a.complement().closure().complement()),
                    ];
                    (r, ev)
                }
                "closure" => {
                    let r = a.closure();
                    let ev = vec![
                        Evidence::region_has(&r, RegionPred::Closed),
                        Evidence::region_subset(a, &r)?,
                        Evidence::region_eq(&r, &a.complement().interior().complement()),
                    ];
                    (r, ev)
                }
                "boundary" => {
                    let r = a.boundary();
                    let ev = vec![
                        Evidence::region_has(&r, RegionPred::Closed),
                        Evidence::region_eq(&r, &a.closure().difference(&a.interior())?),
                    ];
                    (r, ev)
                }
                _ => {
                    let r = a.regularization();
                    let ev = vec![
                        Evidence::region_has(&r, RegionPred::RegularOpen),
                        Evidence::region_eq(&r, &a.closure().interior()),
                    ];
                    (r, ev)
                }
            }
        }
        _ => return Err(Error::PreconditionViolated(format!("unknown region operation {name:?}"))),
    };
    let cert = Certificate::new(name, &format!("the result is the {name} of the operands"), ev);
    Ok(Report::from_certificates(
        &format!("region {name}"),
        json!({ "regions": args }),
        vec![cert],
        json!(out),
    ))
}

pub fn ideal_member(h: &IdealSpec, sub: Sublattice, f: &PLFun, cutoff: usize) -> Result<Report> {
    let m = h.member(sub, f, cutoff)?;
    let ev = m.evidence(h, sub, f, cutoff)?;
    let cert = Certificate::new("membership", &format!("f is {:?} of {h}", m.verdict), ev)
        .with_detail(json!(m.certificate));
    Ok(Report::answer(
        "ideal member",
        json!({ "ideal": h, "sublattice": sub, "f": f, "cutoff": cutoff }),
        vec![cert],
        m.verdict == MemberVerdict::In,
        json!(m.verdict),
    ))
}

pub fn ideal_support(h: &IdealSpec, cutoff: usize) -> Result<Report> {
    let s = h.support();
    let stage = h.determined_stage(cutoff);
    let cert = Certificate::new("support", "the support of an ideal is open", vec![Evidence::region_has(
        &s,
        RegionPred::Open,
    )])
    .with_detail(json!({ "determined_stage": stage }));
    Ok(Report::from_certificates(
        "ideal support",
        json!({ "ideal": h, "cutoff": cutoff }),
        vec![cert],
        json!(s),
    ))
}

pub fn ideal_complement(h: &IdealSpec) -> Result<Report> {
    let d = h.disjoint_complement();
    let (s, sd) = (h.support(), d.support());
    let cert = Certificate::new(
        "disjoint_complement",
        "H^d is the largest ideal disjoint from H: the supports are disjoint and their union is dense",
        vec![
            Evidence::region_has(&s.intersect(&sd)?, RegionPred::Empty),
            Evidence::region_has(&s.union(&sd)?, RegionPred::Dense),
            Evidence::region_has(&sd, RegionPred::RegularOpen),
        ],
    );
    Ok(Report::from_certificates("ideal complement", json!({ "ideal": h }), vec![cert], json!(d)))
}

pub fn ideal_projection(h: &IdealSpec, f: &PLFun, cutoff: usize) -> Result<Report> {
    let (status, status_ev) = h.band_status_evidence(cutoff);
    let mut certs = vec![Certificate::new("band_status", &format!("H is {status}"), status_ev)];
    let inputs = json!({ "ideal": h, "f": f, "cutoff": cutoff });
    if status != BandStatus::ProjectionBand {
        return Ok(Report::answer("ideal projection", inputs, certs, false, Value::Null));
    }
    let (pf, rest) = h.band_projection(f, cutoff)?;
    let s = h.support();
    certs.push(Certificate::new(
        "projection",
        "f = Pf + (f - Pf) with Pf ∈ H and f - Pf ∈ H^d",
        vec![
            Evidence::sum_eq(&[&pf, &rest], f)?,
            Evidence::support_within(&pf, &s)?,
            Evidence::support_within(&rest, &s.closure().complement())?,
        ],
    ));
    Ok(Report::from_certificates(
        "ideal projection",
        inputs,
        certs,
        json!({ "band": pf, "complement": rest }),
    ))
}

pub fn urysohn_coincide(f: &PLFun, k: &Region, u: &Region) -> Result<Report> {
    let e = urysohn::coincide_vanish(f, k, u)?;
    let cert = Certificate::new(
        "coincide_vanish",
        "0 ≤ e ≤ f, e = f on K and e vanishes outside U",
        urysohn::coincide_vanish_evidence(f, k, u, &e)?,
    );
    Ok(Report::from_certificates(
        "urysohn coincide",
        json!({ "f": f, "k": k, "u": u }),
        vec![cert],
        json!(e),
    ))
}

pub fn urysohn_split(f: &PLFun, u: &Region, v: &Region) -> Result<Report> {
    let (g, h) = urysohn::split_cover(f, u, v)?;
    let cert = Certificate::new(
        "split_cover",
        "f = g + h with 0 ≤ g, h ≤ f, supp g ⊆ U and supp h ⊆ V",
        urysohn::split_cover_evidence(f, u, v, &g, &h)?,
    );
    Ok(Report::from_certificates(
        "urysohn split",
        json!({ "f": f, "u": u, "v": v }),
        vec![cert],
        json!({ "g": g, "h": h }),
    ))
}

pub fn urysohn_dsi(h: &IdealSpec, k: &Region, f: &PLFun, cutoff: usize) -> Result<Report> {
    let out = urysohn::ideal_coincide(h, k, f)?;
    let cert = urysohn::ideal_coincide_certificate(h, k, f, &out, cutoff)?;
    Ok(Report::from_certificates(
        "urysohn dsi",
        json!({ "ideal": h, "k": k, "f": f, "cutoff": cutoff }),
        vec![cert],
        json!(out),
    ))
}

pub fn urysohn_od(f: &PLFun, u: &Region) -> Result<Report> {
    let (v, e) = urysohn::order_dense_urysohn(f, u)?;
    let cert = Certificate::new(
        "order_dense",
        "e vanishes outside U and coincides with f on a nonempty open V",
        urysohn::order_dense_evidence(f, u, &v, &e)?,
    );
    Ok(Report::from_certificates(
        "urysohn od",
        json!({ "f": f, "u": u }),
        vec![cert],
        json!({ "v": v, "e": e }),
    ))
}

pub fn abvg(f: &PLFun, seq: &IncreasingSeqRule, unit: &PLFun, terms: usize) -> Result<Report> {
    Ok(urysohn::abvg(f, seq, unit, terms)?.report)
}

pub fn default_space() -> Arc<Space> {
    Space::interval(Rational::from_integer((-1).into()), Rational::from_integer(1.into())).expect("valid interval")
}
