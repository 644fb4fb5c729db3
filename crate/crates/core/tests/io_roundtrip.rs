// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use polychain::generate::{random_grid, random_one_chain, FixtureRng, RandomChainParams};
use polychain::io::{CertificateDocument, ChainDocument, GridDocument};
use polychain::{repair, verify_repair, Modulus};

#[test]
fn chain_documents_survive_a_round_trip() {
    let mut rng = FixtureRng::new(31);
    for _ in 0..50 {
        let chain = random_one_chain(&mut rng, RandomChainParams::default()).unwrap();
        let text = ChainDocument::from_complex(chain.complex())
            .with_chain("P", &chain)
            .to_json();
        let doc = ChainDocument::parse(&text).unwrap();
        let k = Arc::new(doc.complex().unwrap());
        assert_eq!(*k, **chain.complex());
        let back = doc.chain(Some("P"), k).unwrap();
        assert_eq!(back.coeffs(), chain.coeffs());
        assert_eq!(doc.to_json(), text);
    }
}

#[test]
fn certificates_verify_after_reloading() {
    let mut rng = FixtureRng::new(32);
    for p in [2, 3, 5] {
        let p = Modulus::new(p).unwrap();
        let chain = random_one_chain(&mut rng, RandomChainParams::default()).unwrap();
        let (out, cert) = repair(&chain, p).unwrap();
        let text = polychain::io::to_json(&CertificateDocument::from_certificate(&cert).unwrap());
        let doc = CertificateDocument::parse(&text).unwrap();
        assert_eq!(doc.boundary_mass, out.boundary().unwrap().integer_mass());
        assert!(doc.boundary_mass <= doc.boundary_mass_bound);
        let reloaded = doc.certificate(chain.complex().clone()).unwrap();
        assert!(verify_repair(&chain, &out, p, Some(&reloaded))
            .unwrap()
            .all_pass());
    }
}

#[test]
fn grid_documents_round_trip() {
    let mut rng = FixtureRng::new(33);
    let grid = random_grid(&mut rng, &[3, 4, 2], 6).unwrap();
    let text = polychain::io::to_json(&GridDocument::from_grid(&grid));
    let back = GridDocument::parse(&text).unwrap().grid().unwrap();
    assert_eq!(back, grid);
}
