# IsQP Tests Package
