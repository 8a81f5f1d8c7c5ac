use crate::error::Result;
use crate::map::PartialMap;
use crate::perm::{Partition, Permutation};

/// Labelled renderings of every object in the map/permutation
/// correspondence for one `pi`: the rotation scheme and its type, the edge
/// involution, the faces, both canonical permutations, the product
/// `sigma0 pi omega0 pi^-1`, the projection of `R . E(pi)` and the face count.
pub fn correspondence_walkthrough(
    alpha: &Partition,
    beta: &Partition,
    pi: &Permutation,
) -> Result<Vec<(&'static str, String)>> {
    let map = PartialMap::from_permutation(alpha.clone(), beta.clone(), pi)?;
    let r = map.rotation_scheme();
    let faces = map.face_permutation();
    let sigma = alpha.canonical_permutation();
    let omega = beta.canonical_permutation();
    let product = Permutation::compose_all(&[sigma.clone(), pi.clone(), omega.clone(), pi.inverse()])?
        .expect("four factors");
    let projection = map.project_to_permutation()?;
    Ok(vec![
        ("alpha", alpha.to_string()),
        ("beta", beta.to_string()),
        ("pi", pi.to_string()),
        ("R", r.to_string()),
        ("cycle type of R", r.cycle_type().to_string()),
        ("E(pi)", map.edge_involution().to_string()),
        ("R.E(pi)", faces.to_string()),
        ("sigma0", sigma.to_string()),
        ("omega0", omega.to_string()),
        ("sigma0 pi omega0 pi^-1", product.to_string()),
        ("projection", projection.to_string()),
        ("faces", map.completed_faces().to_string()),
    ])
}
