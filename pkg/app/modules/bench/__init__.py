# Bench module initialization
