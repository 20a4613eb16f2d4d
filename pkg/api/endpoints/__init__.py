from . import dynamics, examples, genfun, lie, maps, sequences
