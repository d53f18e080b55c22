from anyonsim import create_app
cli = create_app()

if __name__ == "__main__":
    cli()
