use super::algebra::AlgRef;
use super::module::{FPModule, ModuleMap};
use super::ops::{cokernel_of_map, kernel_of_map, lift_through, submodule};
use crate::algebra::Poly;
use crate::error::{CrispError, Result};

/// `M^start → M^{start+1} → …` with finitely many nonzero terms. Being a complex
/// is not required.
#[derive(Clone, Debug)]
pub struct ComplexOfModules {
    pub base: AlgRef,
    pub start: i64,
    pub modules: Vec<FPModule>,
    /// `diffs[k]: modules[k] → modules[k + 1]`
    pub diffs: Vec<ModuleMap>,
}

/// Cohomology at one index: `ker d^i / im d^{i-1}`, with the kernel generators
/// it is presented on.
pub struct Cohomology {
    pub module: FPModule,
    /// Generators as vectors of `M^i`.
    pub gens: Vec<Vec<Poly>>,
    pub kernel_inclusion: ModuleMap,
}

impl ComplexOfModules {
    pub fn new(base: AlgRef, start: i64, modules: Vec<FPModule>, diffs: Vec<ModuleMap>) -> Result<Self> {
        if modules.is_empty() || diffs.len() + 1 != modules.len() {
            return Err(CrispError::DimensionMismatch(
                "a complex needs one differential between consecutive modules".into(),
            ));
        }
        Ok(ComplexOfModules {
            base,
            start,
            modules,
            diffs,
        })
    }

    pub fn end(&self) -> i64 {
        self.start + self.modules.len() as i64 - 1
    }

    pub fn module(&self, i: i64) -> Option<&FPModule> {
        if i < self.start || i > self.end() {
            None
        } else {
            Some(&self.modules[(i - self.start) as usize])
        }
    }

    fn zero_module(&self) -> FPModule {
        FPModule::free(self.base.clone(), 0)
    }

    /// `d^i`, with zero maps outside the support.
    pub fn diff(&self, i: i64) -> ModuleMap {
        let k = i - self.start;
        if k >= 0 && (k as usize) < self.diffs.len() {
            return self.diffs[k as usize].clone();
        }
        let src = self.module(i).cloned().unwrap_or_else(|| self.zero_module());
        let tgt = self.module(i + 1).cloned().unwrap_or_else(|| self.zero_module());
        ModuleMap::zero(&src, &tgt)
    }

    /// `d^i ∘ d^{i-1} = 0`.
    pub fn is_complex_at(&self, i: i64) -> bool {
        let a = self.diff(i - 1);
        let b = self.diff(i);
        a.then(&b).map(|c| c.is_zero()).unwrap_or(false)
    }

    pub fn is_complex(&self) -> bool {
        (self.start..=self.end()).all(|i| self.is_complex_at(i))
    }

    pub fn cohomology(&self, i: i64) -> Result<Cohomology> {
        if !self.is_complex_at(i) {
            return Err(CrispError::NotAComplexAt(i));
        }
        let di = self.diff(i);
        let (_, incl) = kernel_of_map(&di)?;
        let image = self.diff(i - 1).cols;
        // express the image of d^{i-1} in kernel coordinates
        let lifted: Vec<Vec<Poly>> = image
            .iter()
            .map(|v| lift_through(&incl, v).expect("image lies in kernel"))
            .collect();
        let into_kernel = ModuleMap {
            source: FPModule::free(self.base.clone(), lifted.len()),
            target: incl.source.clone(),
            cols: lifted,
        };
        let module = cokernel_of_map(&into_kernel)?;
        Ok(Cohomology {
            module,
            gens: incl.cols.clone(),
            kernel_inclusion: incl,
        })
    }

    /// `C ⊗ P` termwise with `d ⊗ id`.
    pub fn tensor(&self, p: &FPModule) -> Result<ComplexOfModules> {
        let modules = self
            .modules
            .iter()
            .map(|m| super::ops::tensor_modules(m, p))
            .collect::<Result<Vec<_>>>()?;
        let diffs = self
            .diffs
            .iter()
            .map(|d| super::ops::tensor_map(d, p))
            .collect::<Result<Vec<_>>>()?;
        ComplexOfModules::new(self.base.clone(), self.start, modules, diffs)
    }
}

/// The map `H^i(C) → H^i(D)` induced by a chain map given at index `i` by `f`.
pub fn cohomology_map(c: &Cohomology, d: &Cohomology, f: &ModuleMap) -> Result<ModuleMap> {
    let mut cols = Vec::new();
    for g in &c.gens {
        let img = f.apply(g);
        let coords = lift_through(&d.kernel_inclusion, &img).ok_or_else(|| {
            CrispError::IllDefined("chain map does not preserve cycles".into())
        })?;
        cols.push(coords);
    }
    ModuleMap::new(c.module.clone(), d.module.clone(), cols)
}

/// Submodule generated by `gens` is zero in `m`.
pub fn generates_zero(m: &FPModule, gens: &[Vec<Poly>]) -> bool {
    gens.iter().all(|g| m.is_zero_elem(g))
}

pub fn image_module(u: &ModuleMap) -> Result<FPModule> {
    Ok(submodule(&u.target, u.cols.clone())?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::modules::algebra::FPAlgebra;

    #[test]
    fn cohomology_examples() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x"]);
        let free = FPModule::free(a.clone(), 1);
        let id = ModuleMap::identity(&free);
        let c = ComplexOfModules::new(a.clone(), 0, vec![free.clone(), free.clone()], vec![id]).unwrap();
        assert!(c.cohomology(0).unwrap().module.is_zero());
        assert!(c.cohomology(1).unwrap().module.is_zero());
        let mulx = ModuleMap::new(free.clone(), free.clone(), vec![vec![a.p("x")]]).unwrap();
        let c = ComplexOfModules::new(a.clone(), 0, vec![free.clone(), free.clone()], vec![mulx]).unwrap();
        assert!(c.cohomology(0).unwrap().module.is_zero());
        let h1 = c.cohomology(1).unwrap().module;
        assert!(!h1.is_zero());
        assert!(h1.is_zero_elem(&[a.p("x")]));
    }

    #[test]
    fn non_complex_is_reported() {
        let a = FPAlgebra::polynomial("A", Field::Rationals, &["x"]);
        let free = FPModule::free(a.clone(), 1);
        let id = ModuleMap::identity(&free);
        let c = ComplexOfModules::new(a, 0, vec![free.clone(), free.clone(), free], vec![id.clone(), id]).unwrap();
        assert!(matches!(c.cohomology(1), Err(CrispError::NotAComplexAt(1))));
    }
}
