//! Simplicial maps and the named maps used by the invariant formulas.

use std::fmt;
use std::sync::Arc;

use crate::complex::{SimplicialComplex, VertexId};
use crate::error::{Error, Result};
use crate::label::VertexLabel;

/// A total vertex assignment carrying every facet of the domain to a simplex
/// of the codomain.
#[derive(Clone)]
pub struct SimplicialMap {
    domain: Arc<SimplicialComplex>,
    codomain: Arc<SimplicialComplex>,
    images: Vec<VertexId>,
}

/// Structural equality of complexes, with a pointer fast path.
pub(crate) fn same_complex(a: &Arc<SimplicialComplex>, b: &Arc<SimplicialComplex>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
            && same_complex(&self.domain, &other.domain)
            && same_complex(&self.codomain, &other.codomain)
    }
}

impl Eq for SimplicialMap {}

impl fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (v, &w) in self.images.iter().enumerate() {
            if v > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}->{}", self.domain.label(v as VertexId), self.codomain.label(w))?;
        }
        f.write_str("}")
    }
}

/// Whether a map hits every codomain vertex and every codomain facet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub vertex_surjective: bool,
    pub simplex_surjective: bool,
}

impl SimplicialMap {
    /// Validates an assignment given as label pairs.
    pub fn new(
        domain: Arc<SimplicialComplex>,
        codomain: Arc<SimplicialComplex>,
        assignment: &[(VertexLabel, VertexLabel)],
    ) -> Result<Self> {
        let mut images = vec![u32::MAX; domain.vertex_count()];
        for (v, w) in assignment {
            let vi = domain.id_of(v).ok_or_else(|| Error::UnknownVertex(v.clone()))?;
            let wi = codomain.id_of(w).ok_or_else(|| Error::UnknownVertex(w.clone()))?;
            if images[vi as usize] != u32::MAX {
                return Err(Error::DuplicateAssignment(v.clone()));
            }
            images[vi as usize] = wi;
        }
        if let Some(v) = images.iter().position(|&w| w == u32::MAX) {
            return Err(Error::MissingVertex(domain.label(v as VertexId).clone()));
        }
        Self::from_images(domain, codomain, images)
    }

    /// Validates an image table indexed by domain vertex id.
    pub fn from_images(
        domain: Arc<SimplicialComplex>,
        codomain: Arc<SimplicialComplex>,
        images: Vec<VertexId>,
    ) -> Result<Self> {
        if images.len() != domain.vertex_count() {
            return Err(match domain.labels().get(images.len()) {
                Some(l) => Error::MissingVertex(l.clone()),
                None => Error::DomainMismatch,
            });
        }
        if images.iter().any(|&w| w as usize >= codomain.vertex_count()) {
            return Err(Error::DomainMismatch);
        }
        let map = SimplicialMap {
            domain,
            codomain,
            images,
        };
        if let Some(i) = map.first_bad_facet() {
            return Err(Error::NotSimplicial(map.domain.facet_simplex(i).to_string()));
        }
        Ok(map)
    }

    pub(crate) fn from_images_unchecked(
        domain: Arc<SimplicialComplex>,
        codomain: Arc<SimplicialComplex>,
        images: Vec<VertexId>,
    ) -> Self {
        let map = SimplicialMap {
            domain,
            codomain,
            images,
        };
        debug_assert!(map.first_bad_facet().is_none());
        map
    }

    fn first_bad_facet(&self) -> Option<usize> {
        self.domain.facets().iter().position(|f| {
            let img: Vec<VertexId> = f.iter().map(|&v| self.images[v as usize]).collect();
            !self.codomain.contains_ids(&img)
        })
    }

    pub fn domain(&self) -> &Arc<SimplicialComplex> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<SimplicialComplex> {
        &self.codomain
    }

    /// Image ids indexed by domain vertex id.
    pub fn images(&self) -> &[VertexId] {
        &self.images
    }

    pub fn image_of(&self, v: &VertexLabel) -> Option<&VertexLabel> {
        self.domain
            .id_of(v)
            .map(|i| self.codomain.label(self.images[i as usize]))
    }

    /// The assignment as label pairs in domain label order.
    pub fn assignment(&self) -> Vec<(VertexLabel, VertexLabel)> {
        self.images
            .iter()
            .enumerate()
            .map(|(v, &w)| (self.domain.label(v as VertexId).clone(), self.codomain.label(w).clone()))
            .collect()
    }

    pub fn identity(k: &Arc<SimplicialComplex>) -> Self {
        SimplicialMap {
            domain: k.clone(),
            codomain: k.clone(),
            images: (0..k.vertex_count() as VertexId).collect(),
        }
    }

    pub fn constant(
        k: &Arc<SimplicialComplex>,
        target: &Arc<SimplicialComplex>,
        w0: &VertexLabel,
    ) -> Result<Self> {
        let w = target.id_of(w0).ok_or_else(|| Error::UnknownVertex(w0.clone()))?;
        Ok(SimplicialMap {
            domain: k.clone(),
            codomain: target.clone(),
            images: vec![w; k.vertex_count()],
        })
    }

    /// `g ∘ f`.
    pub fn compose(g: &SimplicialMap, f: &SimplicialMap) -> Result<Self> {
        if !same_complex(&f.codomain, &g.domain) {
            return Err(Error::DomainMismatch);
        }
        let images = f.images.iter().map(|&w| g.images[w as usize]).collect();
        Ok(Self::from_images_unchecked(f.domain.clone(), g.codomain.clone(), images))
    }

    /// The same assignment on a subcomplex of the domain.
    pub fn restrict(&self, sub: &Arc<SimplicialComplex>) -> Result<Self> {
        let mut images = Vec::with_capacity(sub.vertex_count());
        for l in sub.labels() {
            let v = self.domain.id_of(l).ok_or(Error::NotSubcomplex)?;
            images.push(self.images[v as usize]);
        }
        if !sub.is_subcomplex_of(&self.domain) {
            return Err(Error::NotSubcomplex);
        }
        Ok(Self::from_images_unchecked(sub.clone(), self.codomain.clone(), images))
    }

    /// Projection of a product complex (tuple-labelled) onto component `i`
    /// (1-based), landing in `factor`.
    pub fn projection(
        product: &Arc<SimplicialComplex>,
        factor: &Arc<SimplicialComplex>,
        i: usize,
    ) -> Result<Self> {
        if i == 0 {
            return Err(Error::InvalidArity(i));
        }
        let mut images = Vec::with_capacity(product.vertex_count());
        for l in product.labels() {
            let c = l.component(i - 1).ok_or(Error::InvalidArity(i))?;
            images.push(factor.id_of(c).ok_or_else(|| Error::UnknownVertex(c.clone()))?);
        }
        Self::from_images(product.clone(), factor.clone(), images)
    }

    /// `i1(v) = (v, v0)` for slot 1 and `i2(v) = (v0, v)` for slot 2, into
    /// the square `square` of `k`.
    pub fn basepoint_inclusion(
        k: &Arc<SimplicialComplex>,
        square: &Arc<SimplicialComplex>,
        v0: &VertexLabel,
        slot: usize,
    ) -> Result<Self> {
        if k.id_of(v0).is_none() {
            return Err(Error::UnknownVertex(v0.clone()));
        }
        let mut images = Vec::with_capacity(k.vertex_count());
        for v in k.labels() {
            let pair = match slot {
                1 => VertexLabel::tuple(vec![v.clone(), v0.clone()]),
                2 => VertexLabel::tuple(vec![v0.clone(), v.clone()]),
                _ => return Err(Error::InvalidArity(slot)),
            };
            images.push(square.id_of(&pair).ok_or(Error::UnknownVertex(pair))?);
        }
        Self::from_images(k.clone(), square.clone(), images)
    }

    /// `(f × g)(u, w) = (f(u), g(w))` between categorical products.
    pub fn product_map(f: &SimplicialMap, g: &SimplicialMap) -> Self {
        let domain = Arc::new(f.domain.categorical_product(&g.domain));
        let codomain = Arc::new(f.codomain.categorical_product(&g.codomain));
        let m2 = g.codomain.vertex_count() as VertexId;
        let mut images = Vec::with_capacity(domain.vertex_count());
        for &fu in &f.images {
            for &gw in &g.images {
                images.push(fu * m2 + gw);
            }
        }
        Self::from_images_unchecked(domain, codomain, images)
    }

    pub fn surjectivity_report(&self) -> SurjectivityReport {
        let mut hit = vec![false; self.codomain.vertex_count()];
        for &w in &self.images {
            hit[w as usize] = true;
        }
        let images: Vec<Vec<VertexId>> = self
            .domain
            .facets()
            .iter()
            .map(|f| f.iter().map(|&v| self.images[v as usize]).collect())
            .collect();
        let simplex_surjective = self.codomain.facets().iter().all(|t| {
            images.iter().any(|img| t.iter().all(|w| img.contains(w)))
        });
        SurjectivityReport {
            vertex_surjective: hit.iter().all(|&h| h),
            simplex_surjective,
        }
    }

    /// Vertex-level bijectivity.
    pub fn is_bijective(&self) -> bool {
        if self.domain.vertex_count() != self.codomain.vertex_count() {
            return false;
        }
        let mut hit = vec![false; self.codomain.vertex_count()];
        for &w in &self.images {
            if std::mem::replace(&mut hit[w as usize], true) {
                return false;
            }
        }
        true
    }

    /// The vertex-level inverse of a bijective map, if it is simplicial.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.images.len()];
        for (v, &w) in self.images.iter().enumerate() {
            inv[w as usize] = v as VertexId;
        }
        Self::from_images(self.codomain.clone(), self.domain.clone(), inv).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Simplex;

    pub(crate) fn fig1() -> (Arc<SimplicialComplex>, Arc<SimplicialComplex>, SimplicialMap) {
        let l = Arc::new(
            SimplicialComplex::from_tokens(&[&["v0", "v1"], &["v1", "v2"], &["v1", "v3"], &["v2", "v3"]])
                .unwrap(),
        );
        let lp = Arc::new(
            SimplicialComplex::from_tokens(&[&["w0", "w2"], &["w1", "w2"], &["w1", "w3"], &["w2", "w3"]])
                .unwrap(),
        );
        let phi = SimplicialMap::new(
            l.clone(),
            lp.clone(),
            &[
                ("v0".into(), "w0".into()),
                ("v1".into(), "w2".into()),
                ("v2".into(), "w1".into()),
                ("v3".into(), "w3".into()),
            ],
        )
        .unwrap();
        (l, lp, phi)
    }

    #[test]
    fn fig1_phi_is_iso() {
        let (l, _, phi) = fig1();
        let inv = phi.inverse().expect("simplicial inverse");
        assert_eq!(SimplicialMap::compose(&inv, &phi).unwrap(), SimplicialMap::identity(&l));
        let rep = phi.surjectivity_report();
        assert!(rep.vertex_surjective && rep.simplex_surjective);
    }

    #[test]
    fn not_simplicial_names_facet() {
        let (l, lp, _) = fig1();
        // [v1,v3] and [v2,v3] both go to {w0,w3}; the first is reported
        let err = SimplicialMap::new(
            l,
            lp,
            &[
                ("v0".into(), "w0".into()),
                ("v1".into(), "w0".into()),
                ("v2".into(), "w0".into()),
                ("v3".into(), "w3".into()),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotSimplicial(ref f) if f == "[v1,v3]"), "{err}");
    }

    #[test]
    fn missing_and_unknown_vertices() {
        let (l, lp, _) = fig1();
        let err = SimplicialMap::new(l.clone(), lp.clone(), &[("v0".into(), "w0".into())]).unwrap_err();
        assert!(matches!(err, Error::MissingVertex(_)));
        let err = SimplicialMap::new(l, lp, &[("zz".into(), "w0".into())]).unwrap_err();
        assert!(matches!(err, Error::UnknownVertex(_)));
    }

    #[test]
    fn constant_and_identity() {
        let e = Arc::new(SimplicialComplex::from_tokens(&[&["a", "b"]]).unwrap());
        let pt = Arc::new(SimplicialComplex::from_tokens(&[&["w"]]).unwrap());
        let c = SimplicialMap::constant(&e, &pt, &"w".into()).unwrap();
        assert_eq!(c.images(), &[0, 0]);
        assert!(SimplicialMap::constant(&e, &pt, &"q".into()).is_err());
        let id = SimplicialMap::identity(&e);
        assert_eq!(SimplicialMap::compose(&c, &id).unwrap(), c);
        let two = Arc::new(SimplicialComplex::from_tokens(&[&["x", "y"]]).unwrap());
        let c2 = SimplicialMap::constant(&e, &two, &"x".into()).unwrap();
        let rep = c2.surjectivity_report();
        assert!(!rep.vertex_surjective && !rep.simplex_surjective);
    }

    #[test]
    fn compose_mismatch() {
        let (l, lp, phi) = fig1();
        let err = SimplicialMap::compose(&phi, &phi).unwrap_err();
        assert!(matches!(err, Error::DomainMismatch));
        let c = SimplicialMap::constant(&lp, &l, &"v1".into()).unwrap();
        let cf = SimplicialMap::compose(&c, &phi).unwrap();
        assert!(cf.images().iter().all(|&w| w == 1));
    }

    #[test]
    fn restriction() {
        let (l, _, phi) = fig1();
        assert_eq!(phi.restrict(&l).unwrap(), phi);
        let sub = Arc::new(l.generated_subcomplex(&[Simplex::of(&["v1", "v2"])]).unwrap());
        let inc = SimplicialMap::identity(&l).restrict(&sub).unwrap();
        assert_eq!(inc.assignment(), vec![("v1".into(), "v1".into()), ("v2".into(), "v2".into())]);
        let bogus = Arc::new(SimplicialComplex::from_tokens(&[&["v0", "v2"]]).unwrap());
        assert!(matches!(phi.restrict(&bogus), Err(Error::NotSubcomplex)));
    }

    #[test]
    fn projections_and_inclusions() {
        let (l, lp, phi) = fig1();
        let sq = Arc::new(l.power(2).unwrap());
        let p1 = SimplicialMap::projection(&sq, &l, 1).unwrap();
        let p2 = SimplicialMap::projection(&sq, &l, 2).unwrap();
        let v0: VertexLabel = "v0".into();
        let i1 = SimplicialMap::basepoint_inclusion(&l, &sq, &v0, 1).unwrap();
        let i2 = SimplicialMap::basepoint_inclusion(&l, &sq, &v0, 2).unwrap();
        let c = SimplicialMap::constant(&l, &l, &v0).unwrap();
        assert_eq!(SimplicialMap::compose(&p2, &i1).unwrap(), c);
        assert_eq!(SimplicialMap::compose(&p1, &i2).unwrap(), c);
        assert_eq!(SimplicialMap::compose(&p1, &i1).unwrap(), SimplicialMap::identity(&l));
        assert!(SimplicialMap::projection(&sq, &l, 3).is_err());

        let mixed = Arc::new(l.categorical_product(&lp));
        let pi1 = SimplicialMap::projection(&mixed, &l, 1).unwrap();
        let pi2 = SimplicialMap::projection(&mixed, &lp, 2).unwrap();
        for i in 0..mixed.facet_count() {
            let f = &mixed.facets()[i];
            let a: std::collections::BTreeSet<_> = f.iter().map(|&v| pi1.images()[v as usize]).collect();
            let b: std::collections::BTreeSet<_> = f.iter().map(|&v| pi2.images()[v as usize]).collect();
            assert_eq!(a.len() * b.len(), f.len());
        }
        let rep = pi1.surjectivity_report();
        assert!(rep.vertex_surjective && rep.simplex_surjective);

        let beta = SimplicialMap::product_map(&SimplicialMap::identity(&l), &phi);
        assert_eq!(**beta.domain(), *sq);
        assert_eq!(**beta.codomain(), *mixed);
        let lhs = SimplicialMap::compose(&pi1, &beta).unwrap();
        let rhs = SimplicialMap::compose(&SimplicialMap::identity(&l), &p1).unwrap();
        assert_eq!(lhs, rhs);
        let one = SimplicialMap::product_map(&SimplicialMap::identity(&l), &SimplicialMap::identity(&l));
        assert_eq!(one, SimplicialMap::identity(&sq));
    }
}
