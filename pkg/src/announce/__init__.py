"""Finite-model workbench for epistemic logic with quantified announcements."""
from .kripke import (Agent, Model, PointedModel, Test, equiv_class, load_model,
                     new_model, program, reach, restrict, run_program)
from .formula import modal_depth, is_el, is_el_group, atoms_of, agents_of, to_text
from .parser import parse
from .bisim import (Partition, class_formulas, closed_sets, distinguishing_formula,
                    nbisim, stable_bisim)
from .mcheck import (CheckContext, CheckReport, check, check_validity, extension,
                     gal_sets, run_check)
from .tiling import (Tile, TileGrid, TileSet, extract_tiling, gen_cb, gen_grid_model,
                     gen_local, gen_sat, search_tiling, valid_tiling)
from .errors import AnnounceError, QuantifierBudgetExceeded

__version__ = "0.1.0"
