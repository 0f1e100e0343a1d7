# Workload module initialization
