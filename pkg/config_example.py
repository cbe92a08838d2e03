ZONOID_SEED = 7             # сид по умолчанию (если не передан --seed)
MC_SAMPLES = 100000         # число испытаний Монте-Карло по умолчанию
MC_WORKERS = 4              # число потоков для блоков испытаний
MC_BLOCK_SIZE = 4096        # испытаний в одном RNG-блоке (влияет на поток случайных чисел!)
CI_Z = 3.0                  # ширина доверительного интервала: mean ± z * std_error

RANK_REL_TOL = 1e-9         # относительный порог сингулярных чисел для численного ранга
ATOM_PRUNE_TOL = 1e-14      # атомы с меньшей нормой отбрасываются после wedge (float-режим)
COORDINATE_CAP = 1000000    # максимум binom(N, d) координат во внешней степени

OUTPUT_FORMAT = "json"      # json или csv
DATA_DIR = "data"           # где искать относительные пути входных JSON
LOG_LEVEL = "INFO"          # DEBUG покажет прогресс по блокам
DEBUG_MODE = False
