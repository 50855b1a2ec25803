//! Sparse containers, ingestion, permutation and SpMV.

mod cache;
mod coo;
mod csr;
mod gen;
mod mtx;
mod perm;
mod sell;

pub use cache::{read_csr_cache, write_csr_cache, CACHE_MAGIC, CACHE_VERSION};
pub use coo::{coo_to_csr, CooMatrix};
pub use csr::{permute_system, CsrMatrix};
pub use gen::{gen_laplacian_5pt, gen_random_spd};
pub use mtx::{parse_matrix_market, read_matrix_market, write_matrix_market, MtxSymmetry};
pub use perm::Permutation;
pub use sell::{csr_to_sell, SellMatrix};
