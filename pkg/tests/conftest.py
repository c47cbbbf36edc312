from hypothesis import settings

settings.register_profile("locoh", deadline=None, max_examples=40)
settings.load_profile("locoh")
