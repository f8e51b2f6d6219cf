from . import errors, parallel, intsets, density, structure, jin, strcalc, prcalc, ramsey, cli
