# Modules package for the Zariski closure engine
