"""Three-center nuclear attraction integrals over Slater-type orbitals."""
