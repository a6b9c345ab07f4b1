from hypothesis import settings

# Seeded and reproducible: identical example sequences on every run.
settings.register_profile("repro", derandomize=True, deadline=None, print_blob=True)
settings.load_profile("repro")
