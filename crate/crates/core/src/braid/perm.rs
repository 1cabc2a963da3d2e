use std::fmt;

/// Permutation of `{0, …, N−1}` given by its image array, standing for the
/// positive permutation braid whose strand at position `i` ends at `images[i]`.
///
/// Products follow braid order: `p.then(q)` is the braid `p·q`, i.e. the
/// permutation `i ↦ q(p(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one: Vec<u16> = self.images.iter().map(|&x| x as u16 + 1).collect();
        write!(f, "{one:?}")
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    /// The half twist `i ↦ N−1−i`.
    pub fn delta(n: usize) -> Self {
        Perm {
            images: (0..n as u8).rev().collect(),
        }
    }

    /// Transposition of positions `j, j+1` (zero-indexed `j`).
    pub fn simple(n: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(j, j + 1);
        p
    }

    /// From zero-indexed images; `None` unless a bijection.
    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(Perm { images })
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn then(&self, q: &Perm) -> Perm {
        Perm {
            images: self.images.iter().map(|&x| q.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm { images: inv }
    }

    /// Number of crossings of the permutation braid.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    c += 1;
                }
            }
        }
        c
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn is_delta(&self) -> bool {
        let n = self.n();
        self.images.iter().enumerate().all(|(i, &x)| x as usize == n - 1 - i)
    }

    /// `Δ⁻¹ p Δ`, which maps `σ_j` to `σ_{N−j}`.
    pub fn tau(&self) -> Perm {
        let n = self.n();
        let mut out = vec![0u8; n];
        for i in 0..n {
            out[i] = (n - 1 - self.images[n - 1 - i] as usize) as u8;
        }
        Perm { images: out }
    }

    /// Whether `σ_j` is a left prefix: `p = σ_j·p'` with `p'` one shorter.
    #[inline]
    pub fn starts_with(&self, j: usize) -> bool {
        self.images[j] > self.images[j + 1]
    }

    /// Whether `σ_j` is a right suffix: `p = p'·σ_j` with `p'` one shorter.
    pub fn ends_with(&self, j: usize) -> bool {
        let a = self.images.iter().position(|&x| x as usize == j).unwrap();
        let b = self.images.iter().position(|&x| x as usize == j + 1).unwrap();
        a > b
    }

    /// Zero-indexed starting set.
    pub fn starting_set(&self) -> Vec<usize> {
        (0..self.n() - 1).filter(|&j| self.starts_with(j)).collect()
    }

    /// Zero-indexed finishing set.
    pub fn finishing_set(&self) -> Vec<usize> {
        (0..self.n() - 1).filter(|&j| self.ends_with(j)).collect()
    }

    /// `σ_j·p`.
    pub fn left_mul_simple(&self, j: usize) -> Perm {
        let mut q = self.clone();
        q.images.swap(j, j + 1);
        q
    }

    /// `p·σ_j`.
    pub fn right_mul_simple(&self, j: usize) -> Perm {
        Perm {
            images: self
                .images
                .iter()
                .map(|&x| {
                    if x as usize == j {
                        (j + 1) as u8
                    } else if x as usize == j + 1 {
                        j as u8
                    } else {
                        x
                    }
                })
                .collect(),
        }
    }

    /// Reduced positive word (zero-indexed generators) with `p = σ_{w0}σ_{w1}⋯`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut p = self.clone();
        let mut out = Vec::with_capacity(p.length());
        while let Some(j) = (0..p.n() - 1).find(|&j| p.starts_with(j)) {
            out.push(j);
            p = p.left_mul_simple(j);
        }
        out
    }

    /// The complement `∂p` with `(∂p)·p = Δ`.
    pub fn left_complement(&self) -> Perm {
        Perm::delta(self.n()).then(&self.inverse())
    }
}
