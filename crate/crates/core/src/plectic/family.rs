//! Built-in instances for the finite checks, and their JSON description.

use super::module::{GModule, Matrix};
use super::PlecticError;
use crate::group::FiniteGroup;
use serde::Deserialize;

pub struct ShapiroInstance {
    pub name: String,
    pub q: FiniteGroup,
    pub sub: Vec<usize>,
    /// Over the subgroup, labelled in the order of `sub`.
    pub module: GModule,
}

pub struct PlecticInstance {
    pub name: String,
    pub group: FiniteGroup,
    pub size: usize,
    pub module: GModule,
}

pub struct TensorInstance {
    pub name: String,
    pub q: FiniteGroup,
    pub sub: Vec<usize>,
    pub chi: Vec<i64>,
}

/// Cyclic group of order `n` acting on a module; `generator` is element 1.
pub struct CyclicInstance {
    pub name: String,
    pub n: usize,
    pub module: GModule,
}

pub enum Instance {
    Shapiro(ShapiroInstance),
    Plectic(PlecticInstance),
    Tensor(TensorInstance),
}

fn sign(p: &[usize]) -> i64 {
    let inv = (0..p.len()).flat_map(|i| (i + 1..p.len()).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn perm_sign(g: &FiniteGroup, x: usize) -> i64 {
    sign(g.permutation(x).expect("permutation group"))
}

fn residue(v: i64, n: u64) -> u64 {
    v.rem_euclid(n as i64) as u64
}

fn elem(g: &FiniteGroup, p: &[usize]) -> usize {
    g.find_permutation(p).expect("permutation in group")
}

fn sub_of(g: &FiniteGroup, gens: &[&[usize]]) -> Vec<usize> {
    let gens: Vec<usize> = gens.iter().map(|p| elem(g, p)).collect();
    g.generated(&gens)
}

fn over_sub(q: &FiniteGroup, sub: &[usize]) -> FiniteGroup {
    q.subgroup(sub).expect("subgroup").0
}

/// Sign character as a scalar module over `Z/n`.
fn sign_module(h: &FiniteGroup, n: u64) -> GModule {
    GModule::scalar(h, n, |x| residue(perm_sign(h, x), n)).expect("sign module")
}

/// Standard two-dimensional representation of `S3` over `F2`, from its
/// action on `{v in F2^3 : sum v = 0}` with basis `e0+e1, e1+e2`.
fn s3_standard_f2(s3: &FiniteGroup) -> GModule {
    let action: Vec<Matrix> = (0..s3.order())
        .map(|g| {
            let p = s3.permutation(g).unwrap();
            let basis = [[1u64, 1, 0], [0, 1, 1]];
            let image = |v: &[u64; 3]| {
                let mut w = [0u64; 3];
                for i in 0..3 {
                    w[p[i]] = v[i];
                }
                w
            };
            // coordinates of w = a(e0+e1) + b(e1+e2): a = w0, b = w2
            let cols: Vec<[u64; 2]> = basis.iter().map(|v| {
                let w = image(v);
                [w[0], w[2]]
            }).collect();
            vec![vec![cols[0][0], cols[1][0]], vec![cols[0][1], cols[1][1]]]
        })
        .collect();
    GModule::new(s3, 2, action).expect("standard module")
}

pub fn builtin_shapiro() -> Vec<ShapiroInstance> {
    let mut out = Vec::new();
    let mut push = |name: &str, q: FiniteGroup, sub: Vec<usize>, module: GModule| {
        out.push(ShapiroInstance { name: name.to_string(), q, sub, module });
    };
    let c4 = FiniteGroup::cyclic(4);
    let h = over_sub(&c4, &[0, 2]);
    push("C4 > C2, Z/2 trivial", c4.clone(), vec![0, 2], GModule::trivial(&h, 2, 1).unwrap());
    push(
        "C4 > C2, Z/3 by -1",
        c4.clone(),
        vec![0, 2],
        GModule::scalar(&h, 3, |x| if x == 0 { 1 } else { 2 }).unwrap(),
    );
    push(
        "C4 > C4, F2^2 unipotent",
        c4.clone(),
        (0..4).collect(),
        GModule::from_generators(&c4, 2, 2, &[(1, vec![vec![1, 1], vec![0, 1]])]).unwrap(),
    );
    let c2 = FiniteGroup::cyclic(2);
    push(
        "C2 > C2, Z/3 by -1",
        c2.clone(),
        vec![0, 1],
        GModule::scalar(&c2, 3, |x| if x == 0 { 1 } else { 2 }).unwrap(),
    );
    let s3 = FiniteGroup::symmetric(3);
    let t = sub_of(&s3, &[&[1, 0, 2]]);
    let h = over_sub(&s3, &t);
    push("S3 > C2, Z/2 trivial", s3.clone(), t.clone(), GModule::trivial(&h, 2, 1).unwrap());
    push("S3 > C2, Z/3 sign", s3.clone(), t.clone(), sign_module(&h, 3));
    let a3 = sub_of(&s3, &[&[1, 2, 0]]);
    let h = over_sub(&s3, &a3);
    let gen = h.find_permutation(&[1, 2, 0]).unwrap();
    push(
        "S3 > C3, Z/7 by 2",
        s3.clone(),
        a3.clone(),
        GModule::from_generators(&h, 7, 1, &[(gen, vec![vec![2]])]).unwrap(),
    );
    push("S3 > C3, Z/2 trivial", s3.clone(), a3, GModule::trivial(&h, 2, 1).unwrap());
    let c6 = FiniteGroup::cyclic(6);
    let h = over_sub(&c6, &[0, 2, 4]);
    push("C6 > C3, Z/3 trivial", c6.clone(), vec![0, 2, 4], GModule::trivial(&h, 3, 1).unwrap());
    let h = over_sub(&c6, &[0, 3]);
    push(
        "C6 > C2, Z/4 by -1",
        c6,
        vec![0, 3],
        GModule::scalar(&h, 4, |x| if x == 0 { 1 } else { 3 }).unwrap(),
    );
    let d4 = FiniteGroup::dihedral(4);
    let refl = sub_of(&d4, &[&[0, 3, 2, 1]]);
    let h = over_sub(&d4, &refl);
    push("D4 > C2 (reflection), Z/2 trivial", d4.clone(), refl, GModule::trivial(&h, 2, 1).unwrap());
    let rot = sub_of(&d4, &[&[1, 2, 3, 0]]);
    let h = over_sub(&d4, &rot);
    push(
        "D4 > C4, Z/5 by 2",
        d4,
        rot,
        GModule::from_generators(&h, 5, 1, &[(h.find_permutation(&[1, 2, 3, 0]).unwrap(), vec![vec![2]])])
            .unwrap(),
    );
    let s4 = FiniteGroup::symmetric(4);
    let a4 = s4.generated(&(0..s4.order()).filter(|&g| perm_sign(&s4, g) == 1).collect::<Vec<_>>());
    let h = over_sub(&s4, &a4);
    push("S4 > A4, Z/2 trivial", s4.clone(), a4, GModule::trivial(&h, 2, 1).unwrap());
    let s3_in_s4 = sub_of(&s4, &[&[1, 0, 2, 3], &[1, 2, 0, 3]]);
    let h = over_sub(&s4, &s3_in_s4);
    push("S4 > S3, Z/3 sign", s4.clone(), s3_in_s4, sign_module(&h, 3));
    let d4_in_s4 = sub_of(&s4, &[&[1, 2, 3, 0], &[0, 3, 2, 1]]);
    let h = over_sub(&s4, &d4_in_s4);
    push("S4 > D4, Z/2 trivial", s4.clone(), d4_in_s4.clone(), GModule::trivial(&h, 2, 1).unwrap());
    push("S4 > D4, Z/3 sign", s4, d4_in_s4, sign_module(&h, 3));
    let v4 = FiniteGroup::by_name("C2xC2").unwrap();
    let h = over_sub(&v4, &[0, 1]);
    push("C2xC2 > C2, Z/4 trivial", v4, vec![0, 1], GModule::trivial(&h, 4, 1).unwrap());
    let a4 = FiniteGroup::alternating(4);
    let klein = sub_of(&a4, &[&[1, 0, 3, 2], &[2, 3, 0, 1]]);
    let h = over_sub(&a4, &klein);
    push("A4 > V4, Z/2 trivial", a4, klein, GModule::trivial(&h, 2, 1).unwrap());
    out
}

pub fn builtin_plectic() -> Vec<PlecticInstance> {
    let mut out = Vec::new();
    let mut push = |name: &str, group: FiniteGroup, size: usize, module: GModule| {
        out.push(PlecticInstance { name: name.to_string(), group, size, module });
    };
    let c2 = FiniteGroup::cyclic(2);
    let neg = |n: u64| GModule::scalar(&c2, n, move |x| if x == 0 { 1 } else { n - 1 }).unwrap();
    push("C2 on Z/3 by -1, k=2", c2.clone(), 2, neg(3));
    push("C2 on Z/3 by -1, k=3", c2.clone(), 3, neg(3));
    push("C2 on Z/5 by -1, k=2", c2.clone(), 2, neg(5));
    let s3 = FiniteGroup::symmetric(3);
    push("S3 on Z/3 by sign, k=2", s3.clone(), 2, sign_module(&s3, 3));
    push("S3 on Z/5 by sign, k=2", s3.clone(), 2, sign_module(&s3, 5));
    push("S3 on F2^2 standard, k=1", s3.clone(), 1, s3_standard_f2(&s3));
    push("S3 on F2^2 standard, k=2", s3.clone(), 2, s3_standard_f2(&s3));
    let c3 = FiniteGroup::cyclic(3);
    let times2 = GModule::from_generators(&c3, 7, 1, &[(1, vec![vec![2]])]).unwrap();
    push("C3 on Z/7 by 2, k=2", c3.clone(), 2, times2.clone());
    push("C3 on Z/7 by 2, k=3", c3.clone(), 3, times2);
    push(
        "C3 on F2^2, k=2",
        c3.clone(),
        2,
        GModule::from_generators(&c3, 2, 2, &[(1, vec![vec![0, 1], vec![1, 1]])]).unwrap(),
    );
    let c4 = FiniteGroup::cyclic(4);
    push(
        "C4 on Z/5 by 2, k=2",
        c4.clone(),
        2,
        GModule::from_generators(&c4, 5, 1, &[(1, vec![vec![2]])]).unwrap(),
    );
    out
}

pub fn builtin_tensor() -> Vec<TensorInstance> {
    let mut out = Vec::new();
    let c4 = FiniteGroup::cyclic(4);
    out.push(TensorInstance { name: "C4 > C2, nontrivial".into(), q: c4.clone(), sub: vec![0, 2], chi: vec![1, -1] });
    out.push(TensorInstance { name: "C4 > C2, trivial".into(), q: c4, sub: vec![0, 2], chi: vec![1, 1] });
    let s3 = FiniteGroup::symmetric(3);
    let t = sub_of(&s3, &[&[1, 0, 2]]);
    let h = over_sub(&s3, &t);
    let chi: Vec<i64> = (0..h.order()).map(|x| perm_sign(&h, x)).collect();
    out.push(TensorInstance { name: "S3 > C2, sign".into(), q: s3.clone(), sub: t, chi });
    let a3 = sub_of(&s3, &[&[1, 2, 0]]);
    out.push(TensorInstance { name: "S3 > C3, trivial".into(), q: s3, sub: a3, chi: vec![1; 3] });
    let s4 = FiniteGroup::symmetric(4);
    let s3_in_s4 = sub_of(&s4, &[&[1, 0, 2, 3], &[1, 2, 0, 3]]);
    let h = over_sub(&s4, &s3_in_s4);
    let chi: Vec<i64> = (0..h.order()).map(|x| perm_sign(&h, x)).collect();
    out.push(TensorInstance { name: "S4 > S3, sign".into(), q: s4.clone(), sub: s3_in_s4, chi });
    let d4_in_s4 = sub_of(&s4, &[&[1, 2, 3, 0], &[0, 3, 2, 1]]);
    let h = over_sub(&s4, &d4_in_s4);
    let chi: Vec<i64> = (0..h.order()).map(|x| perm_sign(&h, x)).collect();
    out.push(TensorInstance { name: "S4 > D4, sign".into(), q: s4, sub: d4_in_s4, chi });
    let c6 = FiniteGroup::cyclic(6);
    out.push(TensorInstance { name: "C6 > C2, nontrivial".into(), q: c6, sub: vec![0, 3], chi: vec![1, -1] });
    out
}

pub fn builtin_cyclic() -> Vec<CyclicInstance> {
    let specs: [(usize, u64, u64); 9] =
        [(2, 2, 1), (2, 3, 2), (2, 4, 3), (3, 7, 2), (3, 9, 4), (4, 5, 2), (4, 8, 3), (6, 7, 3), (5, 11, 3)];
    specs
        .iter()
        .map(|&(n, modulus, g)| {
            let c = FiniteGroup::cyclic(n);
            CyclicInstance {
                name: format!("C{n} on Z/{modulus} by {g}"),
                n,
                module: GModule::from_generators(&c, modulus, 1, &[(1, vec![vec![g]])]).unwrap(),
            }
        })
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorImage {
    element: usize,
    matrix: Matrix,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum InstanceSpec {
    Shapiro {
        #[serde(default)]
        name: Option<String>,
        group: GroupSpec,
        subgroup: Vec<usize>,
        modulus: u64,
        rank: usize,
        #[serde(default)]
        generators: Vec<GeneratorImage>,
    },
    Plectic {
        #[serde(default)]
        name: Option<String>,
        group: GroupSpec,
        size: usize,
        modulus: u64,
        rank: usize,
        #[serde(default)]
        generators: Vec<GeneratorImage>,
    },
    Tensor {
        #[serde(default)]
        name: Option<String>,
        group: GroupSpec,
        subgroup: Vec<usize>,
        chi: Vec<i64>,
    },
}

/// A standard name or an explicit multiplication table.
#[derive(Deserialize)]
#[serde(untagged)]
enum GroupSpec {
    Name(String),
    Table(Vec<Vec<usize>>),
}

impl GroupSpec {
    fn build(&self) -> Result<FiniteGroup, PlecticError> {
        Ok(match self {
            GroupSpec::Name(n) => FiniteGroup::by_name(n)?,
            GroupSpec::Table(t) => FiniteGroup::from_table(t.clone())?,
        })
    }
}

fn module_from(
    group: &FiniteGroup,
    modulus: u64,
    rank: usize,
    gens: &[GeneratorImage],
) -> Result<GModule, PlecticError> {
    let images: Vec<(usize, Matrix)> = gens.iter().map(|g| (g.element, g.matrix.clone())).collect();
    if images.is_empty() {
        return GModule::trivial(group, modulus, rank);
    }
    GModule::from_generators(group, modulus, rank, &images)
}

/// Parse `{"instances": [...]}`. Module generators are element labels of
/// the acting group; for subgroups, the position in `subgroup`.
pub fn parse_instances(text: &str) -> Result<Vec<Instance>, PlecticError> {
    #[derive(Deserialize)]
    struct Doc {
        instances: Vec<InstanceSpec>,
    }
    let doc: Doc = serde_json::from_str(text).map_err(|e| PlecticError::Spec(e.to_string()))?;
    doc.instances
        .into_iter()
        .enumerate()
        .map(|(i, spec)| {
            let label = |n: Option<String>| n.unwrap_or_else(|| format!("instance {i}"));
            Ok(match spec {
                InstanceSpec::Shapiro { name, group, subgroup, modulus, rank, generators } => {
                    let q = group.build()?;
                    if !q.is_subgroup(&subgroup) {
                        return Err(PlecticError::NotASubgroup);
                    }
                    let (h, _) = q.subgroup(&subgroup)?;
                    let module = module_from(&h, modulus, rank, &generators)?;
                    Instance::Shapiro(ShapiroInstance { name: label(name), q, sub: subgroup, module })
                }
                InstanceSpec::Plectic { name, group, size, modulus, rank, generators } => {
                    let group = group.build()?;
                    let module = module_from(&group, modulus, rank, &generators)?;
                    Instance::Plectic(PlecticInstance { name: label(name), group, size, module })
                }
                InstanceSpec::Tensor { name, group, subgroup, chi } => {
                    let q = group.build()?;
                    Instance::Tensor(TensorInstance { name: label(name), q, sub: subgroup, chi })
                }
            })
        })
        .collect()
}
