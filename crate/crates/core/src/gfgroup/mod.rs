//! The two-generated group `G_f = <F, s>` inside the iterated wreath product
//! `A_f wr <z> wr <s>`: parsing, canonical forms, arithmetic, the embedding
//! of `A_f`, the word problem, and discrete log.

mod canon;
mod dlp;
mod word;

pub use canon::{
    canonical_to_word, canonicalize, canonicalize_parts, deg_alpha, invert, multiply, pi_s, power,
    power_within, swap_commutator, to_conjugate_form, AlphaTerm, CanonicalForm, CommTerm,
};
pub(crate) use canon::push_comm_word;
pub use dlp::{
    comm_to_aword, dlp_g, embed_a, embed_aword, embed_b, equals, wp_canonical, wp_g,
};
pub use word::{length_g, parse_gword, GWord, Gen};
