# MVM mutation-based program repair package
