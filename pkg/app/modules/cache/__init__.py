# Cache module initialization
