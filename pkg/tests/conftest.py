from hypothesis import settings

# oracle and cost checks call into numpy on every example; worker start-up under xdist
# can push the first examples past the default deadline
settings.register_profile("dpfacility", deadline=None)
settings.load_profile("dpfacility")
