from evocar.frontend import cross_evaluate, evaluate_champion, measure_collision_rate
import os

PKG_ROOT = os.path.dirname(__file__)
PROJECT_ROOT = os.path.dirname(PKG_ROOT)
