//! Lattice geometry of the polytope model.

pub mod cover;
pub mod dd;
pub mod division;
pub mod dual;
pub mod faces;
pub mod linalg;
pub mod networks;
pub mod normality;
pub mod points;
pub mod polytope;

pub use cover::{CoverError, Located, SimplexFiberProduct, TreeCover};
pub use division::{gorenstein_check, vertex_link_division, GorensteinReport, SimplexDivision};
pub use dual::{dual_vertices, polarity_check, PolarityReport};
pub use faces::{face_lattice, IncidenceMatrix};
pub use networks::{network_of_socket, networks_of, socket_of, Network, NetworkError, Socket};
pub use normality::{normality_check, NormalityReport};
pub use points::{count_lattice_points, lattice_points, LatticeKind};
pub use polytope::{fiber_product, polytope_of, remove_2valent, Facet, PolytopeError, SubcubePolytope};
