//! Exact computations for the mirror theorem of projective complete
//! intersections: hypergeometric series and Picard-Fuchs operators,
//! equivariant localization recursions, mirror transformations, Yukawa
//! couplings and instanton numbers, small quantum cohomology relations and
//! the equivariant Gromov-Witten recursion of the projective plane.

pub mod equivariant;
pub mod exactalg;
pub mod hyperseries;
pub mod locrec;
pub mod mirrormap;
pub mod p2gw;
pub mod schubert;
pub mod sqcring;
