# Tests package for the affine fermions toolkit
